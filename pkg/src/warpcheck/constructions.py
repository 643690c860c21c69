"""Named constructions assembled from factors, profiles, and curvature checks.

Each function builds one construction, measures every hypothesis it is
supposed to satisfy, and returns a ScenarioVerdict whose checks carry the
measured values and thresholds. Verification failures live in the verdict;
exceptions are reserved for invalid inputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .curvature import (BoundaryBlock, BoundaryData, MultiWarpedMetric,
                        boundary_data, glue_check, ricci_report, volume)
from .errors import InputError, SearchFailureError
from .factors import (FactorManifold, abstract_factor, round_sphere_factor,
                      scale_factor, unit_sphere_volume)
from .profiles import (EXCLUSION_WIDTH, WarpProfile, closability_ode_profile,
                       closed_form_profile, collar_profile, docking_R_profile,
                       k_profile, neck_profile, parity_check,
                       radial_floor_value, sha_yang_profiles)
from .report import (ScenarioVerdict, check_bool, check_eq, check_ge,
                     check_le)


@dataclass(frozen=True)
class CertifiedBlock:
    """A building block taken on external authority: only its boundary data,
    an interior Ricci floor, and optionally its volume are trusted. ``note``
    states what is being assumed."""

    label: str
    boundary: BoundaryData
    interior_ricci_min: float
    dim: int
    volume: Optional[float] = None
    note: str = ""

    def __post_init__(self):
        for b in self.boundary.blocks:
            if not b.radius > 0:
                raise InputError(f"certified block {self.label!r} has a "
                                 "non-positive boundary radius")

    def scaled(self, lam: float) -> "CertifiedBlock":
        """The block with metric g replaced by lam^2 g."""
        if not lam > 0:
            raise InputError("scale must be positive")
        blocks = tuple(
            BoundaryBlock(radius=b.radius * lam, kappa=b.kappa / lam,
                          kappa_normalized=b.kappa_normalized,
                          factor=b.factor,
                          induced=scale_factor(b.factor, b.radius * lam))
            for b in self.boundary.blocks)
        return replace(
            self,
            boundary=replace(self.boundary, blocks=blocks),
            interior_ricci_min=self.interior_ricci_min / lam ** 2,
            volume=None if self.volume is None else self.volume * lam ** self.dim)


def round_boundary(dim: int, radius: float, kappa: float,
                   orientation: int = 1) -> BoundaryData:
    """Boundary data of a round S^dim boundary of the given radius whose
    principal curvatures all equal kappa (w.r.t. the outward normal)."""
    factor = round_sphere_factor(dim, 1.0)
    block = BoundaryBlock(radius=float(radius), kappa=float(kappa),
                          kappa_normalized=float(kappa) * float(radius),
                          factor=factor,
                          induced=scale_factor(factor, float(radius)))
    return BoundaryData(t=0.0, orientation=orientation, blocks=(block,))


def certified_core(dim: int, kappa: float, *, label: str = "core",
                   interior_ricci_min: float = 1.0,
                   volume: Optional[float] = None,
                   note: str = "assumed: positive-Ricci interior with round, "
                               "convex boundary (external construction)"
                   ) -> CertifiedBlock:
    """A core piece: round unit boundary S^(dim-1) with principal curvatures
    kappa, positive Ricci inside; everything interior is assumed."""
    return CertifiedBlock(label=label,
                          boundary=round_boundary(dim - 1, 1.0, kappa),
                          interior_ricci_min=interior_ricci_min,
                          dim=dim, volume=volume, note=note)


def _int_ge(name: str, v, lo: int) -> int:
    if not (isinstance(v, int) and not isinstance(v, bool)) or v < lo:
        raise InputError(f"{name} must be an integer >= {lo}, got {v!r}")
    return v


def sha_yang_space(n: int, m: int, M: FactorManifold, T: float, *,
                   tol: float = 1e-10, grid_size: int = 10_000,
                   asym_threshold: float = 0.05,
                   asym_threshold_h: Optional[float] = None,
                   identity_tol: float = 1e-6) -> ScenarioVerdict:
    """Complete metric dt^2 + h^2 ds_{m-1}^2 + f^2 g_M on [0, T] whose
    rescalings collapse to the cone over (M, g_M).

    Requires Ric_M >= n - 1 on unit vectors and dim M = n. Checks: the first
    integral of the profile equation; the three rate identities tying h to f;
    non-negativity of all Ricci components; odd/even closure parity at t = 0;
    and the asymptotic regime f' -> 1, h -> 2/alpha with strictly decreasing
    deviation sups on successive windows. ``asym_threshold`` bounds
    |f'(T) - 1|; the bound on |h(T) - 2/alpha| defaults to the same tolerance
    measured in the scale of its limit, (2/alpha) * asym_threshold, since
    h - 2/alpha = (2/alpha)(f' - 1) exactly.
    """
    _int_ge("n", n, 2)
    _int_ge("m", m, 2)
    if M.dim != n:
        raise InputError(f"M must have dimension n = {n}, got {M.dim}")
    if M.ricci_lower < n - 1 - 1e-12:
        raise InputError(
            f"M needs Ricci >= n - 1 = {n - 1} on unit vectors, got "
            f"{M.ricci_lower}")
    if not T > 0:
        raise InputError("T must be positive")

    f, h, alpha = sha_yang_profiles(n, m, T, tol)
    sphere = round_sphere_factor(m - 1, 1.0)
    metric = MultiWarpedMetric((0.0, T), ((sphere, h), (M, f)),
                               collapse_left=0)

    checks = []
    resid = f.solver_meta["first_integral_residual"]
    checks.append(check_le("first_integral_residual", "first-integral",
                           resid, 10.0 * tol))

    ts = np.linspace(EXCLUSION_WIDTH, T, 4096)
    fv, fpv, _ = f.eval(ts)
    hv, hpv, hppv = h.eval(ts)
    lhs1 = (1.0 - hpv ** 2) / hv ** 2
    rhs1 = (alpha ** 2 / 4.0) * (1.0 - fv ** (-2.0 * alpha - 2.0)) / (1.0 - fv ** -alpha)
    bound1 = (alpha ** 2 / 4.0) * fv ** (-alpha - 2.0)
    checks.append(check_le("sphere_rate_identity", "identity-sphere-rate",
                           np.max(np.abs(lhs1 - rhs1)), identity_tol))
    checks.append(check_ge("sphere_rate_lower_bound", "identity-sphere-rate",
                           np.min(lhs1 - bound1), -1e-12))
    lhs2 = hppv / hv
    rhs2 = -(alpha * (alpha + 1.0) / 2.0) * fv ** (-alpha - 2.0)
    checks.append(check_le("sphere_accel_identity", "identity-sphere-accel",
                           np.max(np.abs(lhs2 - rhs2)), identity_tol))
    lhs3 = hpv * fpv / (hv * fv)
    rhs3 = (alpha / 2.0) * fv ** (-alpha - 2.0)
    checks.append(check_le("cross_rate_identity", "identity-cross-rate",
                           np.max(np.abs(lhs3 - rhs3)), identity_tol))

    rep = ricci_report(metric, grid_size, lam=0.0)
    checks.append(check_ge("ricci_global_min", "ricci-nonnegative",
                           rep.global_min, -rep.slack))

    checks.append(check_bool("sphere_warp_odd", "closure-parity",
                             parity_check(h, "left", "odd", 2,
                                          unit_slope=True).passed))
    checks.append(check_bool("radial_warp_even", "closure-parity",
                             parity_check(f, "left", "even", 2).passed))

    if asym_threshold_h is None:
        asym_threshold_h = (2.0 / alpha) * asym_threshold
    fp_T = f.eval(T)[1]
    h_T = h.eval(T)[0]
    checks.append(check_le("radial_speed_limit", "asymptotic-cone",
                           abs(fp_T - 1.0), asym_threshold))
    checks.append(check_le("sphere_radius_limit", "asymptotic-cone",
                           abs(h_T - 2.0 / alpha), asym_threshold_h))

    w1 = np.linspace(T / 5.0, 2.0 * T / 5.0, 1024)
    w2 = np.linspace(2.0 * T / 5.0, 4.0 * T / 5.0, 1024)
    sup_f1 = float(np.max(np.abs(f.eval(w1)[1] - 1.0)))
    sup_f2 = float(np.max(np.abs(f.eval(w2)[1] - 1.0)))
    sup_h1 = float(np.max(np.abs(h.eval(w1)[0] - 2.0 / alpha)))
    sup_h2 = float(np.max(np.abs(h.eval(w2)[0] - 2.0 / alpha)))
    checks.append(check_ge("radial_speed_window_decay", "asymptotic-cone",
                           sup_f1 - sup_f2, 0.0, strict=True,
                           note=f"sup drops {sup_f1:.3e} -> {sup_f2:.3e}"))
    checks.append(check_ge("sphere_radius_window_decay", "asymptotic-cone",
                           sup_h1 - sup_h2, 0.0, strict=True,
                           note=f"sup drops {sup_h1:.3e} -> {sup_h2:.3e}"))

    config = {"n": n, "m": m, "T": T, "tol": tol, "grid_size": grid_size,
              "alpha": alpha, "asym_threshold": asym_threshold,
              "asym_threshold_h": asym_threshold_h,
              "identity_tol": identity_tol, "ricci_slack": rep.slack,
              "M": {"name": M.name, "dim": M.dim,
                    "ricci_interval": list(M.ricci_interval)}}
    return ScenarioVerdict("sha-yang", config, tuple(checks),
                           artifacts={"metric": metric, "f": f, "h": h,
                                      "ricci_report": rep})


def cone_asymptotics(metric: MultiWarpedMetric, slopes: Sequence[float],
                     windows: Sequence[float], *, threshold: float = 0.1,
                     grid_size: int = 512) -> ScenarioVerdict:
    """Measure per-block cone convergence: on each window [T, 2T] the sup of
    |f_i(t)/t - c_i| (c_i = 0 for collapsing blocks) must not increase from
    window to window and must end below the threshold."""
    if len(slopes) != len(metric.blocks):
        raise InputError("one target slope per block is required")
    windows = sorted(float(w) for w in windows)
    if not windows:
        raise InputError("at least one window is required")
    t0, t1 = metric.interval
    if 2.0 * windows[-1] > t1 + 1e-12:
        raise InputError(
            f"metric domain ends at {t1}; largest window needs {2 * windows[-1]}")

    sups = np.empty((len(windows), len(metric.blocks)))
    for k, T in enumerate(windows):
        ts = np.linspace(T, 2.0 * T, grid_size)
        for i, (_, profile) in enumerate(metric.blocks):
            fv = profile.eval(ts)[0]
            sups[k, i] = np.max(np.abs(fv / ts - slopes[i]))

    checks = []
    for i in range(len(metric.blocks)):
        if len(windows) > 1:
            worst_rise = float(np.max(np.diff(sups[:, i])))
            checks.append(check_le(f"block{i}_window_monotone", "cone-window-decay",
                                   worst_rise, 1e-12,
                                   note="largest increase across successive windows"))
        checks.append(check_le(f"block{i}_final_sup", "cone-limit-slope",
                               float(sups[-1, i]), threshold))

    config = {"slopes": list(map(float, slopes)), "windows": windows,
              "threshold": threshold, "grid_size": grid_size}
    return ScenarioVerdict("cone-asymptotics", config, tuple(checks),
                           artifacts={"sups": sups})


def neck_family_check(nu: float, n: int, s_values: Sequence[float],
                      core: CertifiedBlock, *, grid_size: int = 2048,
                      glue_tol: float = 1e-9,
                      parallel: bool = False) -> ScenarioVerdict:
    """The shrinking family dt^2 + 2 sin^2(nu t) ds_{n-1}^2 on [s, pi/(4 nu)].

    For every s the outer boundary must be round of radius 1 with principal
    curvatures nu, the inner boundary must glue against the core rescaled by
    sqrt(2) sin(nu s) with positive second-fundamental-form sum, and one
    positive delta must bound every member's Ricci curvature from below; the
    member volumes must likewise share one positive floor.
    """
    _int_ge("n", n, 3)
    if not nu > 0:
        raise InputError("nu must be positive")
    t_out = math.pi / (4.0 * nu)
    s_values = [float(s) for s in s_values]
    if not s_values:
        raise InputError("at least one s value is required")
    for s in s_values:
        if not 0.0 < s < t_out:
            raise InputError(f"s = {s} outside (0, {t_out})")
    if len(core.boundary.blocks) != 1:
        raise InputError("core boundary must have a single round block")
    cb = core.boundary.blocks[0]
    if cb.factor.round_radius != 1.0 or abs(cb.radius - 1.0) > 1e-9 \
            or cb.factor.dim != n - 1:
        raise InputError("core boundary must be a round unit S^(n-1)")
    if cb.kappa < 2.0 * nu - 1e-12:
        raise InputError(
            f"core principal curvatures must be at least 2 nu = {2 * nu}, "
            f"got {cb.kappa}")

    sphere = round_sphere_factor(n - 1, 1.0)

    def member(s: float) -> dict:
        profile = neck_profile(nu, s)
        metric = MultiWarpedMetric((s, t_out), ((sphere, profile),))
        rep = ricci_report(metric, grid_size)
        outer = boundary_data(metric, "right")
        inner = boundary_data(metric, "left")
        lam = math.sqrt(2.0) * math.sin(nu * s)
        glue = glue_check(core.scaled(lam).boundary, inner, glue_tol)
        vol = volume(metric)
        ts = np.linspace(s, t_out, 512)
        drift = float(np.max(np.abs(
            profile.eval(ts)[0] - math.sqrt(2.0) * np.sin(nu * ts))))
        return {"s": s, "report": rep, "outer": outer, "inner": inner,
                "glue": glue, "volume": vol, "lam": lam, "drift": drift}

    if parallel and len(s_values) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=min(8, len(s_values))) as pool:
            per_s = list(pool.map(member, s_values))
    else:
        per_s = [member(s) for s in s_values]

    checks = []
    mins = [e["report"].global_min for e in per_s]
    delta = min(mins) - 1e-9
    checks.append(check_ge("uniform_ricci_floor_delta", "ricci-uniform-floor",
                           delta, 0.0, strict=True,
                           note="min over the s-family of gridwise Ricci minima, "
                                "minus 1e-9 slack"))
    checks.append(check_le("ricci_floor_spread", "ricci-uniform-floor",
                           max(mins) - min(mins), 1e-6))
    checks.append(check_le("outer_radius", "boundary-outer-round",
                           max(abs(e["outer"].blocks[0].radius - 1.0) for e in per_s),
                           1e-10))
    checks.append(check_le("outer_kappa", "boundary-outer-kappa",
                           max(abs(e["outer"].blocks[0].kappa - nu) for e in per_s),
                           1e-10))
    checks.append(check_le(
        "inner_kappa_normalized", "boundary-inner-kappa",
        max(abs(e["inner"].blocks[0].kappa_normalized
                - (-math.sqrt(2.0) * nu * math.cos(nu * e["s"]))) for e in per_s),
        1e-10))
    checks.append(check_bool("core_glue_isometry", "glue-isometry",
                             all(e["glue"].isometry_ok for e in per_s)))
    checks.append(check_ge("core_glue_ii_sum", "glue-ii-sum",
                           min(e["glue"].ii_sum_min for e in per_s), 0.0,
                           strict=True))
    checks.append(check_ge("uniform_volume_floor", "volume-uniform-floor",
                           min(e["volume"] for e in per_s), 0.0, strict=True))
    checks.append(check_le("profile_family_drift", "family-collapse-mechanism",
                           max(e["drift"] for e in per_s), 1e-12,
                           note="members coincide with the limit profile on "
                                "their shared domain; the glued core radius "
                                "sqrt(2) sin(nu s) -> 0 as s -> 0"))

    config = {"nu": nu, "n": n, "s_values": s_values, "grid_size": grid_size,
              "glue_tol": glue_tol, "core_kappa": cb.kappa,
              "core_note": core.note, "delta": delta}
    return ScenarioVerdict("neck", config, tuple(checks),
                           artifacts={"members": per_s})


def certify_collar(core_boundary: BoundaryData, c: float, n: int, *,
                   grid_size: int = 2048, margin: float = 0.25,
                   strict_window: float = 0.5,
                   glue_tol: float = 1e-9) -> ScenarioVerdict:
    """Certification of one collar slope c against a round unit core
    boundary: the collar metric dt^2 + f(t)^2 g must keep Ricci >= 0 out to
    t = 1 + margin, strictly positive Ricci near the gluing slice, and a
    strictly positive second-fundamental-form sum with the core."""
    if len(core_boundary.blocks) != 1:
        raise InputError("core boundary must have a single block")
    cb = core_boundary.blocks[0]
    if abs(cb.radius - 1.0) > 1e-9:
        raise InputError("core boundary must have radius 1")
    if not cb.kappa > 0:
        raise InputError("core boundary must be strictly convex (kappa > 0)")
    _int_ge("n", n, 2)
    if cb.factor.dim != n - 1:
        raise InputError(f"core boundary dimension {cb.factor.dim} "
                         f"does not match n - 1 = {n - 1}")
    if not c > 0:
        raise InputError("c must be positive")

    factor = cb.induced
    profile = collar_profile(c, length=1.0 + margin)
    metric = MultiWarpedMetric((0.0, 1.0 + margin), ((factor, profile),))
    rep_full = ricci_report(metric, grid_size, lam=0.0)
    near = MultiWarpedMetric((0.0, strict_window), ((factor, profile),))
    rep_near = ricci_report(near, grid_size)
    glue = glue_check(core_boundary, boundary_data(metric, "left"), glue_tol)

    checks = (
        check_ge("collar_ricci_nonnegative", "ricci-nonnegative",
                 rep_full.global_min, -rep_full.slack,
                 note="the far collar is exactly conical, so 0 is attained"),
        check_ge("collar_ricci_near_boundary", "ricci-positive-near-glue",
                 rep_near.global_min, 0.0, strict=True),
        check_bool("core_glue_isometry", "glue-isometry", glue.isometry_ok),
        check_ge("core_glue_ii_sum", "glue-ii-sum", glue.ii_sum_min, 0.0,
                 strict=True,
                 note=f"core kappa {cb.kappa} plus collar -2c = {cb.kappa - 2 * c}"),
    )
    config = {"c": c, "n": n, "margin": margin, "strict_window": strict_window,
              "grid_size": grid_size, "glue_tol": glue_tol,
              "core_kappa": cb.kappa,
              "ricci_slack": rep_full.slack}
    return ScenarioVerdict("collar-certify", config, checks,
                           artifacts={"metric": metric, "profile": profile,
                                      "report_full": rep_full,
                                      "report_near": rep_near, "glue": glue})


def collar_closability(core_boundary: BoundaryData, c_max: float, n: int, *,
                       grid_size: int = 2048, margin: float = 0.25,
                       strict_window: float = 0.5) -> ScenarioVerdict:
    """Search for the largest collar slope c in (0, c_max] whose collar
    certifies against the core.

    Outside the ramp the certified collar is exactly dt^2 + (c t + c0)^2 g;
    the linear form is reported as a diagnostic. If no candidate certifies,
    SearchFailureError carries the failing checks of the smallest one tried.
    """
    if not c_max > 0:
        raise InputError("c_max must be positive")

    def ok(c):
        return certify_collar(core_boundary, c, n, grid_size=grid_size,
                              margin=margin, strict_window=strict_window)

    verdict_hi = ok(c_max)
    if verdict_hi.overall:
        c_star, best = c_max, verdict_hi
    else:
        lo, lo_verdict = None, None
        hi = c_max
        c = c_max
        for _ in range(60):
            c *= 0.5
            v = ok(c)
            if v.overall:
                lo, lo_verdict = c, v
                break
            hi = c
        if lo is None:
            raise SearchFailureError(
                f"no collar slope in (0, {c_max}] certifies",
                diagnostics=v.failed_checks())
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            v = ok(mid)
            if v.overall:
                lo, lo_verdict = mid, v
            else:
                hi = mid
        c_star, best = lo, lo_verdict

    profile = best.artifacts["profile"]
    f1 = profile.eval(1.0)[0]
    c0 = f1 - c_star
    t_far = 1.0 + margin
    lin_dev = abs(profile.eval(t_far)[0] - (c_star * t_far + c0))
    slope_dev = abs(profile.eval(t_far)[1] - c_star)

    checks = best.checks + (
        check_ge("certified_c", "closable-slope", c_star, 0.0, strict=True),
        check_le("far_collar_linear_form", "cone-linear-form",
                 max(lin_dev, slope_dev), 1e-12,
                 note=f"f = c t + c0 with c = {c_star}, c0 = {c0} beyond the ramp"),
    )
    config = dict(best.config)
    config.update({"c_max": c_max, "c_star": c_star, "c0": c0})
    return ScenarioVerdict("closability", config, checks,
                           artifacts=dict(best.artifacts, c_star=c_star))


def gN_regions(Y: FactorManifold, eps_prime: float, n: int, *,
               tol: float = 1e-10, grid_size: int = 2048,
               g0: Optional[CertifiedBlock] = None) -> ScenarioVerdict:
    """The two regions of the doubled-boundary space over a totally geodesic
    hypersurface Y.

    Region A is the triply warped k(t)^2 ds^2 + dt^2 + f(t)^2 g_Y near the
    hypersurface; region B is the product k(eps')^2 ds^2 + g0 elsewhere,
    certified analytically. Y must satisfy Ric >= -(n-2); f comes from the
    curvature-floor profile equation and k from the flat-step construction.
    """
    _int_ge("n", n, 3)
    if Y.dim != n - 1:
        raise InputError(f"Y must have dimension n - 1 = {n - 1}, got {Y.dim}")
    if Y.ricci_lower < -(n - 2) - 1e-12:
        raise InputError(
            f"Y needs Ricci >= -(n-2) = {-(n - 2)}, got {Y.ricci_lower}")
    if not eps_prime > EXCLUSION_WIDTH * 4:
        raise InputError(f"eps_prime too small, need > {4 * EXCLUSION_WIDTH}")

    f = closability_ode_profile(n, eps_prime, tol)
    if f.t1 < eps_prime - 1e-12:
        raise InputError(
            f"the radial profile collapses at t = {f.t1:.4f} before "
            f"eps_prime = {eps_prime}; choose eps_prime smaller")
    k = k_profile(eps_prime)
    if g0 is None:
        g0 = CertifiedBlock(
            label="g0", boundary=round_boundary(n - 1, 1.0, 0.0),
            interior_ricci_min=0.0, dim=n,
            note="assumed: deformed interior metric with non-negative Ricci "
                 "curvature (external deformation result)")

    circle = abstract_factor("I", 1, (0.0, 0.0))
    # strictness is checkable only away from the flat end t = eps', where the
    # circle-direction component decays to exactly 0; the boundary slice is
    # covered by the sign certificate below and by region B
    region_a = MultiWarpedMetric((0.0, eps_prime - EXCLUSION_WIDTH),
                                 ((circle, k), (Y, f)), collapse_left=0)
    rep = ricci_report(region_a, grid_size, lam=0.0)

    checks = [
        check_ge("regionA_ricci_min", "ricci-strictly-positive",
                 rep.global_min, 0.0, strict=True,
                 note=f"grid on [{EXCLUSION_WIDTH}, {eps_prime - EXCLUSION_WIDTH}]"),
        check_eq("regionB_circle_direction", "product-flat-direction",
                 0.0, 0.0,
                 note="region B is a metric product with a fixed circle length "
                      "k(eps'); its circle-direction Ricci vanishes identically"),
        check_ge("regionB_interior_floor", "certified-interior",
                 g0.interior_ricci_min, 0.0, note=g0.note),
    ]

    fv0, fp0, _ = f.eval(0.0)
    checks.append(check_le("radial_warp_value", "closure-parity",
                           abs(fv0 - 1.0), 1e-12))
    checks.append(check_bool("radial_warp_even", "closure-parity",
                             parity_check(f, "left", "even", 2).passed))
    checks.append(check_bool("circle_warp_odd_unit", "closure-parity",
                             parity_check(k, "left", "odd", 2,
                                          unit_slope=True).passed))

    eq_grid = np.linspace(0.0, f.t1, 2048)
    eq_dev = float(np.max(np.abs(radial_floor_value(f, n, eq_grid) - 1.0)))
    checks.append(check_le("curvature_floor_identity", "radial-floor-identity",
                           eq_dev, 1e-6))

    sign_grid = np.linspace(0.0, eps_prime, 257)
    fp_all = f.eval(np.clip(sign_grid, 0.0, f.t1))[1]
    kp_all = k.eval(sign_grid)[1]
    checks.append(check_le("radial_warp_monotone", "sign-bookkeeping",
                           float(np.max(fp_all)), 1e-12))
    checks.append(check_ge("circle_warp_monotone", "sign-bookkeeping",
                           float(np.min(kp_all)), -1e-12))
    checks.append(check_ge("cross_terms_nonnegative", "sign-bookkeeping",
                           float(np.min(-kp_all * fp_all)), -1e-15))

    tail = np.linspace(eps_prime - EXCLUSION_WIDTH, eps_prime, 65)
    ktail = k.eval(tail)
    ftail_p = f.eval(np.clip(tail, 0.0, f.t1))[1]
    tail_ok = (np.max(ktail[2]) <= 1e-15 and np.min(ktail[1]) >= -1e-15
               and np.max(ftail_p) <= 1e-15)
    checks.append(check_bool(
        "regionA_boundary_tail_signs", "ricci-nonnegative",
        tail_ok,
        note="on the last width the signs k'' <= 0, k' >= 0, f' <= 0 make "
             "every component a sum of non-negative terms"))

    config = {"n": n, "eps_prime": eps_prime, "tol": tol,
              "grid_size": grid_size,
              "Y": {"name": Y.name, "dim": Y.dim,
                    "ricci_interval": list(Y.ricci_interval)},
              "g0_note": g0.note}
    return ScenarioVerdict("gn", config, tuple(checks),
                           artifacts={"region_a": region_a, "f": f, "k": k,
                                      "ricci_report": rep})


def docking_ambient(n: int, *, R: Optional[WarpProfile] = None,
                    grid_size: int = 2048,
                    include_round_check: Optional[bool] = None) -> ScenarioVerdict:
    """The ambient doubly warped sphere dt^2 + cos^2(t) dx^2 + R(t)^2
    ds_{n-1}^2 on [0, pi/2].

    R must be odd with unit slope at 0, even at pi/2, and strictly concave.
    With the default R = sin the metric is the round unit (n+1)-sphere: every
    Ricci component must equal n to within 1e-9 (checked unless
    ``include_round_check`` is set to False or R is custom).
    """
    _int_ge("n", n, 3)
    default_R = R is None
    if include_round_check is None:
        include_round_check = default_R
    elif include_round_check and not default_R:
        raise InputError("the round-model check applies only to the default R")
    Rp = docking_R_profile() if default_R else R
    half_pi = math.pi / 2.0
    if abs(Rp.t0) > 1e-12 or abs(Rp.t1 - half_pi) > 1e-12:
        raise InputError("R must be defined on [0, pi/2]")

    circle = round_sphere_factor(1, 1.0)
    sphere = round_sphere_factor(n - 1, 1.0)
    cos_p = closed_form_profile("cosine", (0.0, half_pi))
    metric = MultiWarpedMetric((0.0, half_pi), ((circle, cos_p), (sphere, Rp)),
                               collapse_left=1, collapse_right=0)
    rep = ricci_report(metric, grid_size, lam=0.0)

    interior = np.linspace(EXCLUSION_WIDTH, half_pi - EXCLUSION_WIDTH, 66)[1:-1]
    rpp = Rp.eval(interior)[2]
    checks = [
        check_bool("sphere_warp_odd_unit", "closure-parity",
                   parity_check(Rp, "left", "odd", 2, unit_slope=True).passed),
        check_bool("sphere_warp_even_top", "closure-parity",
                   parity_check(Rp, "right", "even", 2).passed),
        check_bool("circle_warp_odd_unit", "closure-parity",
                   parity_check(cos_p, "right", "odd", 2,
                                unit_slope=True).passed),
        check_ge("sphere_warp_concave", "warp-concavity",
                 float(-np.max(rpp)), 0.0, strict=True,
                 note="R'' < 0 sampled at 64 interior points"),
        check_ge("ricci_min", "ricci-strictly-positive", rep.global_min, 0.0,
                 strict=True),
    ]
    if include_round_check:
        dev = max(float(np.max(np.abs(rep.ric_tt - n))),
                  float(np.max(np.abs(rep.block_lo - n))),
                  float(np.max(np.abs(rep.block_hi - n))))
        checks.append(check_le("max_component_spread", "round-model",
                               dev, 1e-9,
                               note=f"default R: the metric is the round unit "
                                    f"S^{n + 1}, every component equals {n}"))

    config = {"n": n, "grid_size": grid_size, "default_R": default_R,
              "round_check": include_round_check}
    return ScenarioVerdict("docking", config, tuple(checks),
                           artifacts={"metric": metric, "ricci_report": rep,
                                      "R": Rp})


def theorem22_hypotheses(family: Sequence[MultiWarpedMetric], n: int,
                         closable_index: int,
                         certificate: Optional[ScenarioVerdict] = None, *,
                         grid_size: int = 2048) -> ScenarioVerdict:
    """Hypothesis checks for a family of cross-section metrics: volumes capped
    by the round model's, Ricci >= n - 2, and one member carrying an attached
    closability certificate.

    Volume constancy across the family is reported (spread and the rescaling
    factor capping the largest member at the model volume), not enforced.
    """
    _int_ge("n", n, 3)
    family = list(family)
    if not family:
        raise InputError("family must be non-empty")
    for i, m in enumerate(family):
        if m.total_dim != n - 1:
            raise InputError(
                f"family member {i} has dimension {m.total_dim}, expected "
                f"cross sections of dimension n - 1 = {n - 1}")
    if not 0 <= closable_index < len(family):
        raise InputError(f"closable_index {closable_index} out of range")
    if certificate is None or not certificate.overall:
        raise InputError(
            "the closable member needs an attached passing closability "
            "certificate")

    target = unit_sphere_volume(n - 1)
    vol_slack = 1e-8 * max(1.0, target)
    lam = float(n - 2)
    checks = []
    vols = []
    for i, m in enumerate(family):
        v = volume(m)
        vols.append(v)
        rep = ricci_report(m, grid_size, lam=lam)
        checks.append(check_le(f"member{i}_volume_cap", "volume-cap",
                               v, target + vol_slack,
                               note=f"round model volume {target}"))
        checks.append(check_ge(f"member{i}_ricci_floor", "ricci-floor",
                               rep.global_min, lam - rep.slack))
    checks.append(check_bool("closable_member_certificate", "closable-member",
                             certificate.overall,
                             note=f"member {closable_index}: certificate from "
                                  f"scenario {certificate.scenario!r}, "
                                  f"c* = {certificate.config.get('c_star')}"))

    spread = max(vols) - min(vols)
    rescale = (target / max(vols)) ** (1.0 / (n - 1))
    config = {"n": n, "grid_size": grid_size, "closable_index": closable_index,
              "volume_spread": spread, "volume_rescale_factor": rescale,
              "rescale_note": "scaling distances by the factor caps the "
                              "largest member volume at the model volume and "
                              "divides Ricci floors by its square",
              "volumes": vols, "lambda": lam}
    return ScenarioVerdict("thm22", config, tuple(checks),
                           artifacts={"volumes": vols})
