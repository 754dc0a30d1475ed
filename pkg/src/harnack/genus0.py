"""Rational (genus-zero) curves of the hexagonal family and their boundary data.

A degree-d rational curve is parametrized on the unit circle by quotients of
half-angle sines: z vanishes at the alpha angles, w vanishes at the gamma
angles, and both share simple poles at the beta angles.  Boundary data (A, B, C)
records w at the zeros of z, 1/z at the zeros of w, and z/w at the poles; the
angle configuration is recovered from a valid triple by a damped Newton
iteration.  The same angle triples drive the isoradial weight construction.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .kasteleyn import BivariatePolynomial, characteristic_polynomial
from .lattice import EdgeWeights

TWO_PI = 2.0 * np.pi

# canonical gauge: first zero of z at angle 0, first pole at 2pi/3,
# first zero of w at 4pi/3
CANONICAL_ANCHORS = (0.0, TWO_PI / 3.0, 2.0 * TWO_PI / 3.0)


def _wrap_angles(values) -> np.ndarray:
    out = np.mod(np.asarray(values, dtype=float), TWO_PI)
    # mod of a tiny negative float can round up to the period itself
    return np.where(out >= TWO_PI, 0.0, out)


def _wrap_signed(values) -> np.ndarray:
    """Reduce angle differences to (-pi, pi]."""
    out = np.mod(np.asarray(values, dtype=float) + np.pi, TWO_PI) - np.pi
    return np.where(out <= -np.pi, np.pi, out)


def _arc_order(alpha, beta, gamma):
    """Return per-family arc traversal orders, or None if the families do not
    occupy three disjoint arcs in counterclockwise order alpha, beta, gamma."""
    d = len(alpha)
    angles = np.concatenate([alpha, beta, gamma])
    labels = np.repeat([0, 1, 2], d)
    order = np.argsort(angles, kind="stable")
    seq = labels[order]
    want = np.repeat([0, 1, 2], d)
    for shift in range(3 * d):
        if np.array_equal(np.roll(seq, -shift), want):
            cyc = np.roll(order, -shift)
            return cyc[:d], cyc[d:2 * d] - d, cyc[2 * d:] - 2 * d
    return None


@dataclass
class Genus0Curve:
    """Sine-quotient parametrization data.

    Angles live in [0, 2pi); each family is stored in arc traversal order
    (counterclockwise along its arc), which coincides with ascending order
    unless the arc straddles 0.  rho_z and rho_w are positive prefactors.
    """

    d: int
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    rho_z: float = 1.0
    rho_w: float = 1.0

    def __post_init__(self) -> None:
        d = int(self.d)
        if d < 1:
            raise ValueError("degree must be at least 1")
        self.d = d
        for name in ("alpha", "beta", "gamma"):
            arr = _wrap_angles(getattr(self, name))
            if arr.shape != (d,):
                raise ValueError(f"{name} must have length d={d}")
            setattr(self, name, arr)
        self.rho_z = float(self.rho_z)
        self.rho_w = float(self.rho_w)
        if self.rho_z <= 0.0 or self.rho_w <= 0.0:
            raise ValueError("prefactors must be positive")
        orders = _arc_order(self.alpha, self.beta, self.gamma)
        if orders is None:
            raise ValueError("angle families not cyclically ordered")
        self.alpha = self.alpha[orders[0]]
        self.beta = self.beta[orders[1]]
        self.gamma = self.gamma[orders[2]]

    @classmethod
    def random(cls, d: int, rng: np.random.Generator,
               rho_low: float = 0.5, rho_high: float = 2.0) -> "Genus0Curve":
        """Draw a valid configuration: 3d+3 gaps bounded away from zero, so
        families stay in disjoint arcs with healthy separations."""
        gaps = rng.uniform(0.4, 1.2, size=3 * d + 3)
        gaps *= TWO_PI / gaps.sum()
        positions = np.cumsum(gaps)
        alpha = positions[0:d]
        beta = positions[d + 1:2 * d + 1]
        gamma = positions[2 * d + 2:3 * d + 2]
        log_lo, log_hi = np.log(rho_low), np.log(rho_high)
        rho_z = float(np.exp(rng.uniform(log_lo, log_hi)))
        rho_w = float(np.exp(rng.uniform(log_lo, log_hi)))
        return cls(d, alpha, beta, gamma, rho_z, rho_w)

    def min_gap(self) -> float:
        full = np.sort(np.concatenate([self.alpha, self.beta, self.gamma]))
        diffs = np.diff(np.concatenate([full, [full[0] + TWO_PI]]))
        return float(diffs.min())


@dataclass
class BoundaryTriple:
    """Boundary data of a genus-zero curve: w at the zeros of z (A), 1/z at
    the zeros of w (B), z/w at the poles (C).  Each vector has constant sign."""

    d: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self) -> None:
        d = int(self.d)
        if d < 1:
            raise ValueError("degree must be at least 1")
        self.d = d
        for name in ("A", "B", "C"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (d,):
                raise ValueError(f"{name} must have length d={d}")
            if np.any(arr == 0.0) or (np.any(arr > 0) and np.any(arr < 0)):
                raise ValueError(f"{name} must have constant nonzero sign")
            setattr(self, name, arr)

    def product(self) -> float:
        return float(np.prod(self.A) * np.prod(self.B) * np.prod(self.C))

    def product_defect(self) -> float:
        """Distance of prod(A_i B_i C_i) from its constrained value (-1)^d."""
        return abs(self.product() - (-1.0) ** self.d)


def _lifted_angles(curve) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Contiguous angle representatives ascending along the arc traversal
    from the first alpha.  Half-angle sines flip sign when a representative
    moves by a period, so sign-carrying formulas must use this lift; it is
    continuous across wrap events (a wrap of the anchor shifts all 3d lifts
    together, an even number of sign flips per coordinate function)."""
    start = curve.alpha[0]
    out = []
    for k, arr in enumerate((curve.alpha, curve.beta, curve.gamma)):
        off = np.mod(arr - start, TWO_PI)
        if k == 0:
            off[0] = 0.0
        else:
            off = np.where(off == 0.0, TWO_PI, off)
        out.append(start + off)
    return out[0], out[1], out[2]


def evaluate_parametrization(curve: Genus0Curve, t):
    """Evaluate (z(t), w(t)); t may be a scalar or an array of angles."""
    al, be, ga = _lifted_angles(curve)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    pole_dist = np.abs(_wrap_signed(t_arr[:, None] - be[None, :]))
    if np.any(pole_dist < 1e-12):
        raise ValueError("parameter value at a pole of the parametrization")
    num_z = np.prod(np.sin(0.5 * (t_arr[:, None] - al[None, :])), axis=1)
    num_w = np.prod(np.sin(0.5 * (t_arr[:, None] - ga[None, :])), axis=1)
    den = np.prod(np.sin(0.5 * (t_arr[:, None] - be[None, :])), axis=1)
    z = curve.rho_z * num_z / den
    w = curve.rho_w * num_w / den
    if np.isscalar(t) or np.asarray(t).ndim == 0:
        return float(z[0]), float(w[0])
    return z, w


def _sample_parameters(curve: Genus0Curve, count: int, offset: float,
                       pole_radius: float = 0.05) -> np.ndarray:
    """Equally spaced parameter angles, thinned near the poles."""
    radius = pole_radius
    while True:
        t = np.linspace(0.0, TWO_PI, 4 * count + 21)[:-1] + offset
        dist = np.abs(_wrap_signed(t[:, None] - curve.beta[None, :])).min(axis=1)
        keep = t[dist > radius]
        if len(keep) >= count:
            return keep[:count]
        radius *= 0.5


def implicitize(curve: Genus0Curve, check_samples: int = 100) -> BivariatePolynomial:
    """Recover the implicit polynomial of total degree d from samples of the
    parametrization, as the one-dimensional null space of a scaled monomial
    collocation matrix."""
    d = curve.d
    pairs = [(i, j) for i in range(d + 1) for j in range(d + 1 - i)]
    n_unknowns = len(pairs)
    t = _sample_parameters(curve, n_unknowns + 30, offset=0.2171)
    z, w = evaluate_parametrization(curve, t)
    zp = z[:, None] ** np.array([i for i, _ in pairs])[None, :]
    wp = w[:, None] ** np.array([j for _, j in pairs])[None, :]
    rows = zp * wp
    rows /= np.abs(rows).max(axis=1, keepdims=True)
    _, sigma, vh = np.linalg.svd(rows, full_matrices=False)
    null_dim = int(np.sum(sigma < 1e-10 * sigma[0]))
    if null_dim != 1:
        raise ValueError(
            f"parametrization degenerate: null space dimension {null_dim}")
    vec = vh[-1]
    vec = vec / np.abs(vec).max()
    coeffs = np.zeros((d + 1, d + 1))
    for (i, j), v in zip(pairs, vec):
        coeffs[i, j] = v
    anchor = coeffs[0, 0]
    if abs(anchor) < 1e-12:
        flat = coeffs.reshape(-1)
        anchor = flat[np.nonzero(np.abs(flat) > 1e-12)[0][0]]
    if anchor < 0:
        coeffs = -coeffs
    poly = BivariatePolynomial(d, coeffs)
    t_check = _sample_parameters(curve, check_samples, offset=0.777)
    zc, wc = evaluate_parametrization(curve, t_check)
    scale = np.abs(BivariatePolynomial(d, np.abs(coeffs))(np.abs(zc), np.abs(wc)))
    worst = float(np.max(np.abs(poly(zc, wc)) / scale))
    if worst > 1e-9:
        raise ValueError(
            f"parametrization degenerate: implicit residual {worst:.3e}")
    return poly


def boundary_map(curve: Genus0Curve) -> BoundaryTriple:
    """Evaluate the boundary data directly from the sine products; the pole
    factors cancel algebraically, so nothing is ever evaluated at a pole."""
    al, be, ga = _lifted_angles(curve)
    s_ag = np.sin(0.5 * (al[:, None] - ga[None, :]))
    s_ab = np.sin(0.5 * (al[:, None] - be[None, :]))
    s_gb = np.sin(0.5 * (ga[:, None] - be[None, :]))
    s_ga = np.sin(0.5 * (ga[:, None] - al[None, :]))
    s_ba = np.sin(0.5 * (be[:, None] - al[None, :]))
    s_bg = np.sin(0.5 * (be[:, None] - ga[None, :]))
    a_vals = curve.rho_w * np.prod(s_ag, axis=1) / np.prod(s_ab, axis=1)
    b_vals = np.prod(s_gb, axis=1) / np.prod(s_ga, axis=1) / curve.rho_z
    c_vals = (curve.rho_z / curve.rho_w) * np.prod(s_ba, axis=1) / np.prod(s_bg, axis=1)
    return BoundaryTriple(curve.d, a_vals, b_vals, c_vals)


# ---------------------------------------------------------------------------
# line chart and the symmetric Jacobian


def _separated_families(curve: Genus0Curve):
    """Spread exact within-family ties by 1e-9 so chart denominators stay
    nonzero; ties are legal input but the Jacobian needs distinct points."""
    out = []
    for arr in (curve.alpha, curve.beta, curve.gamma):
        arr = arr.copy()
        for k in range(1, len(arr)):
            if arr[k] - arr[k - 1] < 1e-9 and arr[k] >= arr[k - 1]:
                arr[k] = arr[k - 1] + 1e-9
        out.append(arr)
    return out


def line_chart(curve: Genus0Curve):
    """Map the circle minus a base point to the real line.

    The base point sits in the middle of the gap between the last gamma and
    the first alpha, so the line ordering is alphas, then betas, then gammas.
    Returns (tau_alpha, tau_gamma, tau_beta, theta0)."""
    al, be, ga = _separated_families(curve)
    gap = float(np.mod(al[0] - ga[-1], TWO_PI))
    theta0 = float(np.mod(ga[-1] + 0.5 * gap, TWO_PI))

    def to_line(theta):
        s = np.mod(theta - theta0, TWO_PI)
        return -1.0 / np.tan(0.5 * s)

    return to_line(al), to_line(ga), to_line(be), theta0


def chart_log_boundary(tau_alpha, tau_gamma, tau_beta) -> np.ndarray:
    """log|A|, log|B|, log|C| as functions of the line-chart coordinates with
    unit chart prefactors; this is the function the Jacobian differentiates."""
    ta = np.asarray(tau_alpha, dtype=float)
    tc = np.asarray(tau_gamma, dtype=float)
    tb = np.asarray(tau_beta, dtype=float)
    log_a = (np.log(np.abs(ta[:, None] - tc[None, :])).sum(axis=1)
             - np.log(np.abs(ta[:, None] - tb[None, :])).sum(axis=1))
    log_b = (np.log(np.abs(tc[:, None] - tb[None, :])).sum(axis=1)
             - np.log(np.abs(tc[:, None] - ta[None, :])).sum(axis=1))
    log_c = (np.log(np.abs(tb[:, None] - ta[None, :])).sum(axis=1)
             - np.log(np.abs(tb[:, None] - tc[None, :])).sum(axis=1))
    return np.concatenate([log_a, log_b, log_c])


def jacobian_logABC(curve: Genus0Curve) -> np.ndarray:
    """Symmetric Jacobian of (log|A|, log|B|, log|C|) in the line chart.

    Rows are (A_1..A_d, B_1..B_d, C_1..C_d); columns are the chart coordinates
    of (alpha_1..alpha_d, gamma_1..gamma_d, beta_1..beta_d), pairing each
    boundary value with the angle that defines it."""
    d = curve.d
    ta, tc, tb, _ = line_chart(curve)
    inv_ac = 1.0 / (ta[:, None] - tc[None, :])
    inv_ab = 1.0 / (ta[:, None] - tb[None, :])
    inv_cb = 1.0 / (tc[:, None] - tb[None, :])
    jac = np.zeros((3 * d, 3 * d))
    rows_a = slice(0, d)
    rows_b = slice(d, 2 * d)
    rows_c = slice(2 * d, 3 * d)
    jac[rows_a, rows_a] = np.diag(inv_ac.sum(axis=1) - inv_ab.sum(axis=1))
    jac[rows_a, rows_b] = -inv_ac
    jac[rows_a, rows_c] = inv_ab
    jac[rows_b, rows_a] = -inv_ac.T
    jac[rows_b, rows_b] = np.diag(inv_cb.sum(axis=1) + inv_ac.sum(axis=0))
    jac[rows_b, rows_c] = -inv_cb
    jac[rows_c, rows_a] = inv_ab.T
    jac[rows_c, rows_b] = -inv_cb.T
    jac[rows_c, rows_c] = np.diag(inv_cb.sum(axis=0) - inv_ab.sum(axis=0))
    return jac


def jacobian_kernel_vectors(curve: Genus0Curve) -> tuple[np.ndarray, np.ndarray]:
    """The two exact null directions in the chart: a common translation of all
    coordinates, and the coordinate vector itself (scaling)."""
    ta, tc, tb, _ = line_chart(curve)
    ones = np.ones(3 * curve.d)
    coords = np.concatenate([ta, tc, tb])
    return ones, coords


def jacobian_blocks(curve: Genus0Curve) -> np.ndarray:
    """The (d,d,d,3,3) array of elementary rank-one interaction blocks; the
    full Jacobian is their sum over all index triples divided by d.  Block
    (i,j,k) acts on the chart coordinates of (alpha_i, gamma_j, beta_k)."""
    d = curve.d
    ta, tc, tb, _ = line_chart(curve)
    p = 1.0 / (ta[:, None, None] - tc[None, :, None]) * np.ones((1, 1, d))
    q = 1.0 / (tb[None, None, :] - ta[:, None, None]) * np.ones((1, d, 1))
    r = 1.0 / (tc[None, :, None] - tb[None, None, :]) * np.ones((d, 1, 1))
    blocks = np.empty((d, d, d, 3, 3))
    blocks[..., 0, 0] = p + q
    blocks[..., 0, 1] = -p
    blocks[..., 0, 2] = -q
    blocks[..., 1, 0] = -p
    blocks[..., 1, 1] = p + r
    blocks[..., 1, 2] = -r
    blocks[..., 2, 0] = -q
    blocks[..., 2, 1] = -r
    blocks[..., 2, 2] = q + r
    return blocks


def assemble_from_blocks(curve: Genus0Curve) -> np.ndarray:
    """Sum the elementary blocks into the full Jacobian (consistency helper)."""
    d = curve.d
    blocks = jacobian_blocks(curve)
    jac = np.zeros((3 * d, 3 * d))
    for i in range(d):
        for j in range(d):
            for k in range(d):
                idx = (i, d + j, 2 * d + k)
                for r in range(3):
                    for c in range(3):
                        jac[idx[r], idx[c]] += blocks[i, j, k, r, c]
    return jac / d


# ---------------------------------------------------------------------------
# Newton inversion of the boundary map


def _newton_jacobian(alpha, beta, gamma) -> np.ndarray:
    """Derivatives of (log|A|, log|B|, log|C|) with respect to all 3d angles
    and (log rho_z, log rho_w), in the circle chart."""
    d = len(alpha)

    def cot(x):
        return 1.0 / np.tan(0.5 * x)

    cot_ag = cot(alpha[:, None] - gamma[None, :])
    cot_ab = cot(alpha[:, None] - beta[None, :])
    cot_gb = cot(gamma[:, None] - beta[None, :])
    jac = np.zeros((3 * d, 3 * d + 2))
    rows_a = slice(0, d)
    rows_b = slice(d, 2 * d)
    rows_c = slice(2 * d, 3 * d)
    cols_a = slice(0, d)
    cols_b = slice(d, 2 * d)
    cols_g = slice(2 * d, 3 * d)
    # cot is odd, so cot((g-a)/2) = -cot((a-g)/2) reuses the same tables
    jac[rows_a, cols_a] = np.diag(0.5 * (cot_ag.sum(axis=1) - cot_ab.sum(axis=1)))
    jac[rows_a, cols_g] = -0.5 * cot_ag
    jac[rows_a, cols_b] = 0.5 * cot_ab
    jac[rows_b, cols_g] = np.diag(0.5 * (cot_gb.sum(axis=1) + cot_ag.sum(axis=0)))
    jac[rows_b, cols_a] = -0.5 * cot_ag.T
    jac[rows_b, cols_b] = -0.5 * cot_gb
    jac[rows_c, cols_b] = np.diag(0.5 * (-cot_ab.sum(axis=0) + cot_gb.sum(axis=0)))
    jac[rows_c, cols_a] = 0.5 * cot_ab.T
    jac[rows_c, cols_g] = -0.5 * cot_gb.T
    jac[rows_a, 3 * d + 1] = 1.0
    jac[rows_b, 3 * d] = -1.0
    jac[rows_c, 3 * d] = 1.0
    jac[rows_c, 3 * d + 1] = -1.0
    return jac


def _log_boundary(alpha, beta, gamma, log_rho_z, log_rho_w) -> np.ndarray:
    s_ag = np.abs(np.sin(0.5 * (alpha[:, None] - gamma[None, :])))
    s_ab = np.abs(np.sin(0.5 * (alpha[:, None] - beta[None, :])))
    s_gb = np.abs(np.sin(0.5 * (gamma[:, None] - beta[None, :])))
    log_a = log_rho_w + np.log(s_ag).sum(axis=1) - np.log(s_ab).sum(axis=1)
    log_b = -log_rho_z + np.log(s_gb).sum(axis=1) - np.log(s_ag).sum(axis=0)
    log_c = (log_rho_z - log_rho_w
             + np.log(s_ab).sum(axis=0) - np.log(s_gb).sum(axis=0))
    return np.concatenate([log_a, log_b, log_c])


def _ordered(full: np.ndarray) -> bool:
    return bool(np.all(np.diff(full) > 0.0) and full[0] >= 0.0 and full[-1] < TWO_PI)


def validate_boundary_triple(target: BoundaryTriple, tol: float = 1e-8) -> None:
    """Reject targets outside the realizable sign/product pattern."""
    sign_c = (-1.0) ** target.d
    if np.any(target.A <= 0) or np.any(target.B <= 0) or np.any(sign_c * target.C <= 0):
        raise ValueError("invalid boundary data: sign pattern not realizable")
    if target.product_defect() > tol:
        raise ValueError(
            f"invalid boundary data: product constraint violated by "
            f"{target.product_defect():.3e}")


def invert_boundary(target: BoundaryTriple, tol: float = 1e-10,
                    max_steps: int = 50, with_stats: bool = False):
    """Recover the unique gauge-fixed curve with the given boundary data.

    Gauge: alpha_1, beta_1, gamma_1 pinned to the canonical anchors, target
    rescaled to A_1 = B_1 = 1; the rescaling is undone on the way out.  Damped
    Newton with a least-squares step, Armijo backtracking, and a step clip of
    half the smallest cyclic gap.  Raises on targets violating the sign or
    product pattern and on stagnation."""
    validate_boundary_triple(target)
    d = target.d
    scale_a = target.A[0]
    scale_b = target.B[0]
    log_target = np.concatenate([
        np.log(target.A / scale_a),
        np.log(target.B / scale_b),
        np.log(np.abs(target.C) * scale_a * scale_b),
    ])

    spread = TWO_PI / (3.0 * d)
    alpha = CANONICAL_ANCHORS[0] + spread * np.arange(d)
    beta = CANONICAL_ANCHORS[1] + spread * np.arange(d)
    gamma = CANONICAL_ANCHORS[2] + spread * np.arange(d)
    log_rho = np.zeros(2)
    free_cols = np.concatenate([
        np.arange(1, d), d + np.arange(1, d), 2 * d + np.arange(1, d),
        [3 * d, 3 * d + 1],
    ])

    def residual(al, be, ga, lr):
        return _log_boundary(al, be, ga, lr[0], lr[1]) - log_target

    res = residual(alpha, beta, gamma, log_rho)
    steps = 0
    for steps in range(1, max_steps + 1):
        if np.max(np.abs(res)) < tol:
            steps -= 1
            break
        jac = _newton_jacobian(alpha, beta, gamma)[:, free_cols]
        step, *_ = np.linalg.lstsq(jac, -res, rcond=None)
        angle_step = step[:-2]
        full = np.concatenate([alpha, beta, gamma])
        gaps = np.diff(np.concatenate([np.sort(full), [np.sort(full)[0] + TWO_PI]]))
        max_move = np.max(np.abs(angle_step)) if len(angle_step) else 0.0
        limit = 0.5 * gaps.min()
        if max_move > limit > 0:
            step *= limit / max_move
        norm0 = np.linalg.norm(res)
        lam = 1.0
        accepted = False
        for _ in range(14):
            trial = np.concatenate([alpha, beta, gamma, log_rho])
            trial[free_cols] += lam * step
            al, be, ga = trial[:d], trial[d:2 * d], trial[2 * d:3 * d]
            lr = trial[3 * d:]
            if _ordered(np.concatenate([al, be, ga])):
                new_res = residual(al, be, ga, lr)
                if np.linalg.norm(new_res) <= (1.0 - 1e-4 * lam) * norm0:
                    alpha, beta, gamma, log_rho = al, be, ga, lr
                    res = new_res
                    accepted = True
                    break
            lam *= 0.5
        if not accepted:
            raise RuntimeError(
                f"no convergence: line search stalled at step {steps}, "
                f"residual {norm0:.3e}")
    else:
        if np.max(np.abs(res)) >= tol:
            raise RuntimeError(
                f"no convergence: residual {np.max(np.abs(res)):.3e} "
                f"after {max_steps} steps")

    rho_z = float(np.exp(log_rho[0]) / scale_b)
    rho_w = float(np.exp(log_rho[1]) * scale_a)
    curve = Genus0Curve(d, alpha, beta, gamma, rho_z, rho_w)
    if with_stats:
        return curve, {"steps": steps, "residual": float(np.max(np.abs(res)))}
    return curve


# ---------------------------------------------------------------------------
# gauge transport (disk automorphisms acting on the parameter circle)


def mobius_through(src, dst) -> np.ndarray:
    """2x2 matrix of the Mobius map sending the three src points to dst."""

    def standard(p):
        # maps p1, p2, p3 to 0, 1, infinity
        return np.array([
            [p[1] - p[2], -p[0] * (p[1] - p[2])],
            [p[1] - p[0], -p[2] * (p[1] - p[0])],
        ], dtype=complex)

    m_dst = standard(dst)
    inv = np.array([[m_dst[1, 1], -m_dst[0, 1]], [-m_dst[1, 0], m_dst[0, 0]]])
    return inv @ standard(src)


def apply_mobius(matrix: np.ndarray, u):
    return (matrix[0, 0] * u + matrix[0, 1]) / (matrix[1, 0] * u + matrix[1, 1])


def _mobius_inverse(matrix: np.ndarray) -> np.ndarray:
    return np.array([[matrix[1, 1], -matrix[0, 1]],
                     [-matrix[1, 0], matrix[0, 0]]])


def interior_value(curve: Genus0Curve, u: complex) -> tuple[complex, complex]:
    """Analytic continuation of (z, w) off the parameter circle: for
    u = exp(i t) this reproduces evaluate_parametrization exactly."""
    al, be, ga = _lifted_angles(curve)
    a = np.exp(1j * al)
    b = np.exp(1j * be)
    g = np.exp(1j * ga)
    phase_z = np.exp(0.5j * np.sum(be - al))
    phase_w = np.exp(0.5j * np.sum(be - ga))
    z = curve.rho_z * phase_z * np.prod((u - a) / (u - b))
    w = curve.rho_w * phase_w * np.prod((u - g) / (u - b))
    return complex(z), complex(w)


def transport_gauge(curve: Genus0Curve, matrix: np.ndarray) -> Genus0Curve:
    """Reparametrize by a Mobius automorphism of the disk.

    The curve in the (z, w) plane is unchanged; angles move to their images
    and the prefactors are re-read off at the new disk center."""
    new_al = _wrap_angles(np.angle(apply_mobius(matrix, np.exp(1j * curve.alpha))))
    new_be = _wrap_angles(np.angle(apply_mobius(matrix, np.exp(1j * curve.beta))))
    new_ga = _wrap_angles(np.angle(apply_mobius(matrix, np.exp(1j * curve.gamma))))
    center_pre = apply_mobius(_mobius_inverse(matrix), 0.0 + 0.0j)
    if abs(center_pre) >= 1.0:
        raise ValueError("gauge transport is not a disk automorphism")
    z0, w0 = interior_value(curve, center_pre)
    return Genus0Curve(curve.d, new_al, new_be, new_ga, abs(z0), abs(w0))


def align_canonical(curve: Genus0Curve) -> Genus0Curve:
    """Transport to the gauge with the first angles at the canonical anchors."""
    src = np.exp(1j * np.array([curve.alpha[0], curve.beta[0], curve.gamma[0]]))
    dst = np.exp(1j * np.array(CANONICAL_ANCHORS))
    return transport_gauge(curve, mobius_through(src, dst))


# ---------------------------------------------------------------------------
# isoradial angle data


@dataclass
class IsoradialAngles:
    """Unit rhombus directions of an isoradial embedding: one angle per row
    (gamma), column (alpha), and diagonal (beta) of the fundamental domain."""

    d: int
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self) -> None:
        d = int(self.d)
        if d < 1:
            raise ValueError("degree must be at least 1")
        self.d = d
        for name in ("alpha", "beta", "gamma"):
            arr = _wrap_angles(getattr(self, name))
            if arr.shape != (d,):
                raise ValueError(f"{name} must have length d={d}")
            setattr(self, name, arr)
        orders = _arc_order(self.alpha, self.beta, self.gamma)
        if orders is None:
            raise ValueError("not isoradial")
        self.alpha = self.alpha[orders[0]]
        self.beta = self.beta[orders[1]]
        self.gamma = self.gamma[orders[2]]

    @classmethod
    def random(cls, d: int, rng: np.random.Generator) -> "IsoradialAngles":
        gaps = rng.uniform(0.4, 1.2, size=3 * d + 3)
        gaps *= TWO_PI / gaps.sum()
        positions = np.cumsum(gaps)
        return cls(d, positions[0:d], positions[d + 1:2 * d + 1],
                   positions[2 * d + 2:3 * d + 2])

    @classmethod
    def from_curve(cls, curve: Genus0Curve) -> "IsoradialAngles":
        return cls(curve.d, curve.alpha, curve.beta, curve.gamma)

    def as_curve(self) -> Genus0Curve:
        return Genus0Curve(self.d, self.alpha, self.beta, self.gamma, 1.0, 1.0)


def isoradial_weights(angles: IsoradialAngles) -> EdgeWeights:
    """Edge weights of the isoradial embedding: each edge crosses the rhombus
    spanned by its two unit track directions and gets the crossing diagonal
    2|sin((theta1-theta2)/2)|, which equals sqrt(4 - other_diagonal^2)."""
    d = angles.d
    i = np.arange(d)[:, None]
    j = np.arange(d)[None, :]
    k = (i + j) % d
    beta_k = angles.beta[k]
    c_w = 2.0 * np.abs(np.sin(0.5 * (angles.gamma[i] - angles.alpha[j])))
    a_w = 2.0 * np.abs(np.sin(0.5 * (angles.gamma[i] - beta_k)))
    b_w = 2.0 * np.abs(np.sin(0.5 * (angles.alpha[j] - beta_k)))
    floor = 1e-12
    if min(c_w.min(), a_w.min(), b_w.min()) < floor:
        warnings.warn("degenerate rhombus: zero edge weight floored",
                      stacklevel=2)
        c_w = np.maximum(c_w, floor)
        a_w = np.maximum(a_w, floor)
        b_w = np.maximum(b_w, floor)
    return EdgeWeights(d, a_w, b_w, c_w)


@dataclass
class IsoradialReport:
    residual: float
    on_curve: bool
    origin_in_amoeba: bool
    genus: int | None = None


def isoradial_spectral_check(angles: IsoradialAngles, n_samples: int = 100,
                             check_genus: bool = False) -> IsoradialReport:
    """Verify that the unit-prefactor parametrization lies on the spectral
    curve of the isoradial weights (after the degree-parity sign flip) and
    that the amoeba contains the origin."""
    from .amoeba import amoeba_membership, detect_holes

    weights = isoradial_weights(angles)
    poly = characteristic_polynomial(weights)
    curve = angles.as_curve()
    t = _sample_parameters(curve, n_samples, offset=0.1234, pole_radius=1e-3)
    z, w = evaluate_parametrization(curve, t)
    sign = (-1.0) ** angles.d
    scale = np.abs(BivariatePolynomial(poly.d, np.abs(poly.coeffs))(np.abs(z), np.abs(w)))
    residual = float(np.max(np.abs(poly(sign * z, sign * w)) / scale))
    origin = amoeba_membership(poly, 0.0, 0.0)
    genus = None
    if check_genus:
        genus = detect_holes(poly).genus
    return IsoradialReport(residual=residual, on_curve=residual < 1e-8,
                           origin_in_amoeba=origin, genus=genus)


# ---------------------------------------------------------------------------
# shift point: moving a genus-zero curve to unit prefactors


def _interior_log_moduli(curve: Genus0Curve, u: complex) -> np.ndarray:
    z, w = interior_value(curve, u)
    if z == 0 or w == 0:
        return np.array([-745.0, -745.0])
    return np.array([np.log(abs(z)), np.log(abs(w))])


def _shift_newton(curve: Genus0Curve, start: complex, tol: float = 1e-12):
    u = complex(start)
    h = 1e-7
    for _ in range(60):
        f = _interior_log_moduli(curve, u)
        if np.max(np.abs(f)) < tol:
            return u
        fx = (_interior_log_moduli(curve, u + h) - _interior_log_moduli(curve, u - h)) / (2 * h)
        fy = (_interior_log_moduli(curve, u + 1j * h) - _interior_log_moduli(curve, u - 1j * h)) / (2 * h)
        jac = np.column_stack([fx, fy])
        try:
            delta = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return None
        lam = 1.0
        norm0 = np.linalg.norm(f)
        moved = False
        for _ in range(20):
            trial = u + lam * (delta[0] + 1j * delta[1])
            if abs(trial) < 0.999999:
                if np.linalg.norm(_interior_log_moduli(curve, trial)) < norm0:
                    u = trial
                    moved = True
                    break
            lam *= 0.5
        if not moved:
            return None
    return None


def find_isoradial_shift(curve: Genus0Curve, extra_starts=()):
    """Locate the unique disk point where both |z| and |w| equal 1 and
    transport the curve so that point becomes the disk center, producing unit
    prefactors.  Returns (zeta, shifted_curve), or None when the origin lies
    outside the amoeba (no such point exists)."""
    from .amoeba import amoeba_membership

    poly = implicitize(curve)
    if not amoeba_membership(poly, 0.0, 0.0):
        return None
    starts = [0.0 + 0.0j]
    for radius in (0.35, 0.7):
        starts.extend(radius * np.exp(1j * np.linspace(0, TWO_PI, 9)[:-1]))
    starts.extend(extra_starts)
    best = None
    for start in starts:
        u = _shift_newton(curve, start)
        if u is not None and abs(u) < 1.0 - 1e-8:
            best = u
            break
    if best is None:
        # dense polar sweep before giving up
        grid_best, grid_val = None, np.inf
        for radius in np.linspace(0.05, 0.95, 19):
            for ang in np.linspace(0, TWO_PI, 41)[:-1]:
                u0 = radius * np.exp(1j * ang)
                val = np.linalg.norm(_interior_log_moduli(curve, u0))
                if val < grid_val:
                    grid_best, grid_val = u0, val
        u = _shift_newton(curve, grid_best)
        if u is None or abs(u) >= 1.0 - 1e-8:
            raise RuntimeError(
                "no convergence: shift point search failed with best residual "
                f"{grid_val:.3e}")
        best = u
    zeta = complex(best)
    matrix = np.array([[1.0, -zeta], [-np.conj(zeta), 1.0]], dtype=complex)
    return zeta, transport_gauge(curve, matrix)
