#!/usr/bin/env python3
"""Generate orthogonal wavelet filter tables (haar, db10, sym8, coif5).

Produces the scaling (synthesis low-pass, "rec_lo") coefficients at full
double precision, verified against the defining constraints:

  * sum(h) = sqrt(2)
  * orthonormality: sum_k h[k] h[k+2m] = delta(m)
  * dbN / symN: N vanishing wavelet moments
  * symN: least-asymmetric spectral factorization
  * coifK: 2K vanishing wavelet moments and 2K-1 vanishing scaling moments
           (about the support offset -2K)

db10/sym8 come from spectral factorization of the Daubechies half-band
polynomial; coif5 from Gauss-Newton on the coiflet moment system starting
at the perturbative (linearized) solution.  Every filter is Newton-polished
on its full constraint system, so the emitted values are accurate to ~1e-15.

Usage: python3 tools/gen_filter_coeffs.py > filter_tables.inc
"""

import math
import numpy as np

SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------------------
# Laurent-polynomial helpers (coeffs stored low-to-high with an offset).


def conv(a, b):
    return np.convolve(a, b)


def poly_pow(p, n):
    out = np.array([1.0])
    for _ in range(n):
        out = conv(out, p)
    return out


# ---------------------------------------------------------------------------
# Daubechies half-band machinery.


def halfband_poly(n):
    """P(y) = sum_{k<n} C(n-1+k, k) y^k."""
    return np.array([math.comb(n - 1 + k, k) for k in range(n)], dtype=float)


def halfband_roots(n):
    p = halfband_poly(n)
    # numpy wants high-to-low order
    roots = np.roots(p[::-1])
    # Newton polish in complex double
    dp = p[1:] * np.arange(1, len(p))
    for _ in range(50):
        vals = np.polyval(p[::-1], roots)
        dvals = np.polyval(dp[::-1], roots)
        roots = roots - vals / dvals
    return roots


def z_pair(y):
    """Solve z^2 - (2 - 4y) z + 1 = 0; return (inside, outside) roots."""
    b = 2.0 - 4.0 * y
    disc = np.sqrt(b * b - 4.0 + 0j)
    z1 = (b + disc) / 2.0
    z2 = (b - disc) / 2.0
    if abs(z1) > abs(z2):
        z1, z2 = z2, z1
    return z1, z2  # |z1| <= 1 <= |z2|


def root_groups(n):
    """Group the z-roots of Q by conjugate closure.

    Returns a list of (inside_set, outside_set); picking either set from each
    group keeps coefficients real and yields a valid orthonormal filter.
    """
    ys = halfband_roots(n)
    groups = []
    used = np.zeros(len(ys), dtype=bool)
    for i, y in enumerate(ys):
        if used[i]:
            continue
        used[i] = True
        if abs(y.imag) < 1e-9:
            zi, zo = z_pair(y.real)
            groups.append(([zi.real], [zo.real]))
        else:
            # find the conjugate partner
            j = int(np.argmin(np.abs(ys - np.conj(y)) + used * 1e9))
            used[j] = True
            zi, zo = z_pair(y)
            groups.append(([zi, np.conj(zi)], [zo, np.conj(zo)]))
    return groups


def filter_from_roots(n, roots):
    """h = sqrt(2) * ((1+z)/2)^n * prod (z - r) / (1 - r), low-to-high coeffs."""
    q = np.array([1.0 + 0j])
    for r in roots:
        q = conv(q, np.array([-r, 1.0]))  # (z - r), low-to-high
    q = q.real / np.prod([1.0 - r for r in roots]).real
    base = poly_pow(np.array([0.5, 0.5]), n)
    h = SQRT2 * conv(base, q)
    return h


# ---------------------------------------------------------------------------
# Constraint residuals and Newton polish.


def moment_rows(L, n_psi_moments, k0, n_phi_moments):
    """Scaled/centred moment constraint rows (all O(1) for conditioning).

    Vanishing psi moments p = 0..n-1 about any centre are equivalent, so the
    psi rows are centred on the support midpoint.  Phi (scaling) moments are
    pinned to k = 0 by the coiflet support convention, so only scaled.
    """
    k = (np.arange(L) + k0).astype(float)
    s = max(1.0, np.max(np.abs(k)))
    sign = (-1.0) ** np.arange(L)
    rows = []
    kc = (k - np.mean(k)) / s
    for p in range(n_psi_moments):
        rows.append(sign * kc**p)
    for p in range(1, n_phi_moments + 1):
        rows.append((k / s) ** p)
    return rows


def residuals(h, n_psi_moments, k0=0, n_phi_moments=0):
    L = len(h)
    res = [np.sum(h) - SQRT2]
    for m in range(L // 2):
        target = 1.0 if m == 0 else 0.0
        res.append(np.dot(h[: L - 2 * m], h[2 * m :]) - target)
    for row in moment_rows(L, n_psi_moments, k0, n_phi_moments):
        res.append(np.dot(row, h))
    return np.array(res)


def jacobian(h, n_psi_moments, k0=0, n_phi_moments=0):
    L = len(h)
    rows = [np.ones(L)]
    for m in range(L // 2):
        row = np.zeros(L)
        row[: L - 2 * m] += h[2 * m :]
        row[2 * m :] += h[: L - 2 * m]
        rows.append(row)
    rows.extend(moment_rows(L, n_psi_moments, k0, n_phi_moments))
    return np.vstack(rows)


def polish(h, n_psi_moments, k0=0, n_phi_moments=0, iters=8):
    h = h.copy()
    for _ in range(iters):
        r = residuals(h, n_psi_moments, k0, n_phi_moments)
        J = jacobian(h, n_psi_moments, k0, n_phi_moments)
        step, *_ = np.linalg.lstsq(J, -r, rcond=None)
        h = h + step
        if np.max(np.abs(r)) < 1e-15:
            break
    return h


# ---------------------------------------------------------------------------
# Families.


def daubechies(n):
    groups = root_groups(n)
    roots = [r for g in groups for r in g[0]]  # extremal phase: all inside
    h = filter_from_roots(n, roots)
    h = h[::-1]  # classic table orientation (energy front-loaded)
    return polish(h, n)


def phase_nonlinearity(h):
    w = np.linspace(0.02, math.pi - 0.35, 512)
    H = np.array([np.sum(h * np.exp(-1j * w_ * np.arange(len(h)))) for w_ in w])
    phi = np.unwrap(np.angle(H))
    A = np.vstack([w, np.ones_like(w)]).T
    coef, *_ = np.linalg.lstsq(A, phi, rcond=None)
    return np.max(np.abs(phi - A @ coef))


def symlet(n):
    groups = root_groups(n)
    best = None
    for mask in range(1 << len(groups)):
        roots = []
        for i, g in enumerate(groups):
            roots.extend(g[0] if (mask >> i) & 1 == 0 else g[1])
        h = filter_from_roots(n, roots)
        score = phase_nonlinearity(h)
        if best is None or score < best[0]:
            best = (score, h)
    h = best[1]
    # canonical orientation: peak just right of centre (pywt/matlab symN)
    if np.argmax(np.abs(h)) < len(h) // 2:
        h = h[::-1]
    return polish(h, n)


def coiflet(K):
    """Support k = -2K .. 4K-1; m0 = (1-f)^K P(f) + f^K F with f = sin^2(w/2)."""
    L = 6 * K
    f = np.array([-0.25, 0.5, -0.25])  # offset -1
    c1 = np.array([0.25, 0.5, 0.25])  # (1 - f), offset -1
    # T1 = (1-f)^K * sum_{k<K} C(K-1+k,k) f^k   (offset -(2K-1))
    acc = np.zeros(4 * K - 1)
    fk = np.array([1.0])
    for k in range(K):
        term = conv(poly_pow(c1, K), fk) * math.comb(K - 1 + k, k)
        pad = (len(acc) - len(term)) // 2
        acc[pad : pad + len(term)] += term
        fk = conv(fk, f)
    t1 = np.zeros(L)  # support offset -2K
    t1[1 : 4 * K] = acc  # -(2K-1) sits at array index 1
    # basis: column j = taps of f^K shifted by (j - K), j = 0 .. 4K-1
    fK = poly_pow(f, K)  # offset -K, length 2K+1
    B = np.zeros((L, 4 * K))
    for j in range(4 * K):
        B[j : j + 2 * K + 1, j] = fK
    phi = np.zeros(4 * K)

    def h_of(phi):
        return SQRT2 * (t1 + B @ phi)

    for _ in range(60):
        h = h_of(phi)
        r = residuals(h, 2 * K, k0=-2 * K)
        dr_dh = jacobian(h, 2 * K, k0=-2 * K)
        J = dr_dh @ (SQRT2 * B)
        step, *_ = np.linalg.lstsq(J, -r, rcond=None)
        phi = phi + step
        if np.max(np.abs(r)) < 1e-15:
            break
    h = h_of(phi)
    return polish(h, 2 * K, k0=-2 * K, n_phi_moments=2 * K - 1)


# ---------------------------------------------------------------------------
# Verification anchors (published values, low precision OK).

COIF1_ANCHOR = [
    -0.0727326195128539,
    0.3378976624578092,
    0.8525720202122554,
    0.3848648468642029,
    -0.0727326195128539,
    -0.0156557281354645,
]

DB10_HEAD_ANCHOR = [0.026670057901, 0.188176800078, 0.527201188932, 0.688459039454]

SYM8_PEAK_ANCHOR = [0.3644418948353314, 0.7771857517005235, 0.4813596512583722]


def check(name, h, n_psi, k0=0, n_phi=0):
    r = residuals(h, n_psi, k0, n_phi)
    worst = np.max(np.abs(r))
    assert worst < 1e-12, f"{name}: residual {worst}"
    print(f"// {name}: max constraint residual {worst:.3e}")


def emit(name, h):
    print(f"inline constexpr std::array<double, {len(h)}> {name} = {{")
    for v in h:
        print(f"    {float(v)!r},")
    print("};")
    print()


def main():
    db10 = daubechies(10)
    check("db10", db10, 10)
    assert np.max(np.abs(db10[:4] - DB10_HEAD_ANCHOR)) < 1e-9, db10[:4]

    sym8 = symlet(8)
    check("sym8", sym8, 8)
    assert np.max(np.abs(sym8[7:10] - SYM8_PEAK_ANCHOR)) < 1e-9, sym8[7:10]

    coif1 = coiflet(1)
    check("coif1", coif1, 2, k0=-2, n_phi=1)
    assert np.max(np.abs(coif1 - COIF1_ANCHOR)) < 1e-9, coif1

    coif5 = coiflet(5)
    check("coif5", coif5, 10, k0=-10, n_phi=9)

    print()
    emit("kDb10Scaling", db10)
    emit("kSym8Scaling", sym8)
    emit("kCoif5Scaling", coif5)


if __name__ == "__main__":
    main()
