"""Hot integer kernels: arithmetic-function sieves and exhaustive module sweeps.

Every public function dispatches to a numba implementation when available and
to a vectorised numpy implementation otherwise. Both paths return identical
results; ``tests/test_kernels.py`` runs them against each other.
"""

import math

import numpy as np

from ._accel import HAVE_NUMBA, njit


# ---------------------------------------------------------------------------
# omega / phi sieve


@njit
def _omega_phi_numba(n):
    omega = np.zeros(n + 1, dtype=np.int64)
    phi = np.arange(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if omega[p] == 0:
            for m in range(p, n + 1, p):
                omega[m] += 1
                phi[m] -= phi[m] // p
    return omega, phi


def _omega_phi_numpy(n):
    omega = np.zeros(n + 1, dtype=np.int64)
    phi = np.arange(n + 1, dtype=np.int64)
    is_prime = np.ones(n + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, int(math.isqrt(n)) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    for p in np.flatnonzero(is_prime):
        omega[p::p] += 1
        phi[p::p] -= phi[p::p] // p
    return omega, phi


def omega_phi_table(n):
    """Arrays ``omega[k]`` and ``phi[k]`` for ``0 <= k <= n`` (entries at 0 are junk)."""
    n = int(n)
    if n < 1:
        raise ValueError("table size must be >= 1")
    if HAVE_NUMBA:
        return _omega_phi_numba(n)
    return _omega_phi_numpy(n)


# ---------------------------------------------------------------------------
# float screening of the two analytic inequalities

# Relative error allowance for the float evaluation of 7 ln N / (5 ln ln N)
# and N / (2 ln N + 1); anything closer than this is re-checked with balls.
SCREEN_MARGIN = 1e-9


@njit
def _screen_numba(omega, phi, lo, hi, margin):
    size = hi - lo + 1
    robin_ok = np.zeros(size, dtype=np.bool_)
    phi_ok = np.zeros(size, dtype=np.bool_)
    for i in range(size):
        n = lo + i
        ln = math.log(n)
        rhs = 7.0 * ln / (5.0 * math.log(ln))
        robin_ok[i] = omega[n] <= rhs * (1.0 - margin)
        low = n / (2.0 * ln + 1.0)
        phi_ok[i] = phi[n] >= low * (1.0 + margin)
    return robin_ok, phi_ok


def _screen_numpy(omega, phi, lo, hi, margin):
    n = np.arange(lo, hi + 1, dtype=np.float64)
    ln = np.log(n)
    rhs = 7.0 * ln / (5.0 * np.log(ln))
    robin_ok = omega[lo : hi + 1] <= rhs * (1.0 - margin)
    low = n / (2.0 * ln + 1.0)
    phi_ok = phi[lo : hi + 1] >= low * (1.0 + margin)
    return robin_ok, phi_ok


def screen_inequalities(omega, phi, lo, hi, margin=SCREEN_MARGIN):
    """Boolean arrays over ``[lo, hi]``: True where the float slack clears ``margin``.

    False entries are *undecided*, not failures; callers re-check them with
    certified arithmetic.
    """
    if lo < 3:
        raise ValueError("screening needs lo >= 3")
    if HAVE_NUMBA:
        return _screen_numba(omega, phi, int(lo), int(hi), float(margin))
    return _screen_numpy(omega, phi, int(lo), int(hi), float(margin))


# ---------------------------------------------------------------------------
# orbit sizes of homothety actions on (Z/N)^2


@njit
def _orbit_sizes_numba(N, mults):
    total = N * N
    sizes = np.zeros(total, dtype=np.int64)
    stamp = np.zeros(total, dtype=np.int64)
    for idx in range(total):
        p1 = idx // N
        p2 = idx % N
        count = 0
        for j in range(mults.shape[0]):
            m = mults[j]
            q = ((m * p1) % N) * N + (m * p2) % N
            if stamp[q] != idx + 1:
                stamp[q] = idx + 1
                count += 1
        sizes[idx] = count
    return sizes


def _orbit_sizes_numpy(N, mults, chunk=4096):
    total = N * N
    sizes = np.empty(total, dtype=np.int64)
    m = mults.astype(np.int64)[:, None]
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        p1 = idx // N
        p2 = idx % N
        images = ((m * p1[None, :]) % N) * N + (m * p2[None, :]) % N
        images.sort(axis=0)
        sizes[start : start + idx.size] = 1 + np.count_nonzero(np.diff(images, axis=0), axis=0)
    return sizes


def orbit_sizes(N, multipliers):
    """Orbit size of every point of (Z/N)^2 under multiplication by ``multipliers``.

    Index ``i`` of the result is the point ``(i // N, i % N)``.
    """
    mults = np.asarray(sorted({int(a) % N for a in multipliers}), dtype=np.int64)
    if HAVE_NUMBA:
        return _orbit_sizes_numba(int(N), mults)
    return _orbit_sizes_numpy(int(N), mults)


def point_orders(N):
    """Additive order of every point of (Z/N)^2, same indexing as :func:`orbit_sizes`."""
    idx = np.arange(N * N, dtype=np.int64)
    g = np.gcd(np.gcd(idx // N, idx % N), N)
    return N // g


# ---------------------------------------------------------------------------
# homotheties versus cyclic submodules of (Z/N)^r


@njit
def _cyclic_sweep_numba(N, r, units):
    total = N**r
    stamp = np.zeros(total, dtype=np.int64)
    seen = np.zeros(total, dtype=np.bool_)
    v = np.zeros(r, dtype=np.int64)
    w = np.zeros(r, dtype=np.int64)
    n_sub = 0
    n_fail = 0
    for idx in range(1, total):
        if seen[idx]:
            continue
        rem = idx
        for i in range(r):
            v[i] = rem % N
            rem //= N
        # stamp the submodule <v>
        for i in range(r):
            w[i] = 0
        while True:
            code = 0
            for i in range(r - 1, -1, -1):
                code = code * N + w[i]
            stamp[code] = idx
            for i in range(r):
                w[i] = (w[i] + v[i]) % N
            zero = True
            for i in range(r):
                if w[i] != 0:
                    zero = False
            if zero:
                break
        n_sub += 1
        for j in range(units.shape[0]):
            b = units[j]
            code = 0
            for i in range(r - 1, -1, -1):
                code = code * N + (b * v[i]) % N
            # b*v generates the same submodule as v; skip it later
            seen[code] = True
            if stamp[code] != idx:
                n_fail += 1
    return n_sub, n_fail


def _cyclic_sweep_numpy(N, r, units):
    total = N**r
    powers = N ** np.arange(r, dtype=np.int64)
    seen = np.zeros(total, dtype=bool)
    units = np.asarray(units, dtype=np.int64)
    ks = np.arange(N, dtype=np.int64)
    n_sub = 0
    n_fail = 0
    for idx in range(1, total):
        if seen[idx]:
            continue
        v = (idx // powers) % N
        members = ((ks[:, None] * v[None, :]) % N) @ powers
        images = ((units[:, None] * v[None, :]) % N) @ powers
        seen[images] = True
        n_sub += 1
        n_fail += int(np.count_nonzero(~np.isin(images, members)))
    return n_sub, n_fail


def cyclic_submodule_sweep(N, r, units):
    """Check ``b * <v> = <v>`` for every cyclic submodule of (Z/N)^r and unit ``b``.

    Each submodule is visited once (generators differing by a unit are
    skipped). Since multiplication by a unit is injective, ``b*v in <v>``
    already gives equality. Returns ``(submodules_checked, failures)``.
    """
    units = np.asarray(sorted(int(b) % N for b in units), dtype=np.int64)
    if HAVE_NUMBA:
        return _cyclic_sweep_numba(int(N), int(r), units)
    return _cyclic_sweep_numpy(int(N), int(r), units)


# ---------------------------------------------------------------------------
# segmented prime sieve


def primes_in_range(lo, hi):
    """Sorted numpy array of the primes p with ``lo <= p < hi`` (integers)."""
    lo = max(int(lo), 2)
    hi = int(hi)
    if hi <= lo:
        return np.zeros(0, dtype=np.int64)
    root = math.isqrt(hi - 1) + 1
    base = np.ones(root + 1, dtype=bool)
    base[:2] = False
    for p in range(2, math.isqrt(root) + 1):
        if base[p]:
            base[p * p :: p] = False
    seg = np.ones(hi - lo, dtype=bool)
    for p in np.flatnonzero(base):
        p = int(p)
        start = max(p * p, ((lo + p - 1) // p) * p)
        seg[start - lo :: p] = False
    return np.flatnonzero(seg).astype(np.int64) + lo
