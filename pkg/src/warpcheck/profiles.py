"""Warping profiles: positive functions f(t) with exact derivative access.

Profiles come from closed forms, initial value problems, splicing, and
mollification. Every profile evaluates to the triple (f, f', f''), vectorized
over t. Near an endpoint where the profile closes up smoothly (a cone point,
or a reflection-symmetric end) evaluation is served by the stored parity
expansion instead of the raw formula, so endpoint values like f(t*) = 0 or
f'(t*) = 0 are exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import (ConstructionError, GlueMismatchError, InputError,
                     IntegrationQualityError)
from .ode import DenseSolution, OdeRhs, integrate_ivp
from .quadrature import CumulativeIntegral, adaptive_quad

# Width of the endpoint window where tagged profiles evaluate via their parity
# expansion; also the exclusion radius used by curvature grids around
# collapsing endpoints.
EXCLUSION_WIDTH = 1e-3


@dataclass(frozen=True)
class ParityTag:
    """Certified endpoint behavior.

    kind "odd":  f(t*) = 0, even derivatives vanish; coeffs = (c1, c3) with
                 f ~ c1 s + c3 s^3/6 in the signed offset s = t - t*.
    kind "even": f'(t*) = 0; coeffs = (c0, c2) with f ~ c0 + c2 s^2/2.
    kind "flat": even with all derivatives vanishing; coeffs = (c0, 0).
    """

    kind: str
    order: int = 2
    coeffs: tuple = ()

    def __post_init__(self):
        if self.kind not in ("odd", "even", "flat"):
            raise InputError(f"unknown parity kind {self.kind!r}")


@dataclass(frozen=True)
class Joint:
    """A splice location; f and f' match there, f'' may jump by fpp_jump."""

    t: float
    fpp_jump: float


@dataclass(frozen=True, eq=False)
class WarpProfile:
    """A positive warping function on an interval with two derivatives.

    ``kind`` records provenance: closed-form | ivp-solution | spliced |
    mollified. Instances are immutable; evaluation is a pure function of t.
    """

    domain: tuple[float, float]
    kind: str
    raw_eval: Callable
    parity: dict = field(default_factory=dict)
    joints: tuple = ()
    solver_meta: Optional[dict] = None

    def __post_init__(self):
        t0, t1 = self.domain
        if not t1 > t0:
            raise InputError(f"empty profile domain [{t0}, {t1}]")

    @property
    def t0(self) -> float:
        return self.domain[0]

    @property
    def t1(self) -> float:
        return self.domain[1]

    def parity_at(self, endpoint: str) -> Optional[ParityTag]:
        return self.parity.get(endpoint)

    def eval(self, t):
        """(f, f', f'') at t, scalar or ndarray; t must lie in the domain."""
        tq = np.asarray(t, dtype=float)
        scalar = tq.ndim == 0
        tq = np.atleast_1d(tq)
        t0, t1 = self.domain
        slack = 1e-9 * (t1 - t0) + 1e-12
        if tq.size and (tq.min() < t0 - slack or tq.max() > t1 + slack):
            raise InputError(
                f"evaluation outside profile domain [{t0}, {t1}]: "
                f"[{tq.min()}, {tq.max()}]")
        tc = np.clip(tq, t0, t1)
        f, fp, fpp = (np.array(a, dtype=float, copy=True)
                      for a in self.raw_eval(tc))
        for endpoint, tstar in (("left", t0), ("right", t1)):
            tag = self.parity.get(endpoint)
            if tag is None or not tag.coeffs:
                continue
            if tag.kind == "odd":
                # cone points: serve the whole near-endpoint window, since the
                # raw formula degenerates as f -> 0
                if endpoint == "left":
                    mask = tc < tstar + EXCLUSION_WIDTH
                else:
                    mask = tc > tstar - EXCLUSION_WIDTH
            else:
                # even/flat ends are regular; the expansion only pins the
                # endpoint values (f' exactly 0) without widening the error
                mask = tc == tstar
            if not mask.any():
                continue
            s = tc[mask] - tstar
            if tag.kind == "odd":
                c1, c3 = tag.coeffs
                f[mask] = c1 * s + c3 * s ** 3 / 6.0
                fp[mask] = c1 + 0.5 * c3 * s ** 2
                fpp[mask] = c3 * s + 0.0
            else:
                c0, c2 = tag.coeffs
                f[mask] = c0 + 0.5 * c2 * s ** 2
                fp[mask] = c2 * s + 0.0
                fpp[mask] = np.full_like(s, c2)
        if scalar:
            return float(f[0]), float(fp[0]), float(fpp[0])
        return f, fp, fpp

    def sample(self, n: int):
        """Uniform grid of n points with (t, f, f', f'') columns."""
        if n < 2:
            raise InputError("need at least 2 sample points")
        t = np.linspace(self.t0, self.t1, n)
        f, fp, fpp = self.eval(t)
        return t, f, fp, fpp

    def restrict(self, a: float, b: float) -> "WarpProfile":
        """The same profile on a sub-interval [a, b]."""
        t0, t1 = self.domain
        if not (t0 - 1e-12 <= a < b <= t1 + 1e-12):
            raise InputError(f"[{a}, {b}] is not inside [{t0}, {t1}]")
        parity = {}
        if abs(a - t0) <= 1e-12 and "left" in self.parity:
            parity["left"] = self.parity["left"]
        if abs(b - t1) <= 1e-12 and "right" in self.parity:
            parity["right"] = self.parity["right"]
        joints = tuple(j for j in self.joints if a < j.t < b)
        return WarpProfile(domain=(max(a, t0), min(b, t1)), kind=self.kind,
                           raw_eval=self.raw_eval, parity=parity, joints=joints,
                           solver_meta=self.solver_meta)


def profile_from_callable(domain, f, fp, fpp, *, kind: str = "closed-form",
                          parity: Optional[dict] = None) -> WarpProfile:
    """Wrap three vectorized callables (f, f', f'') as a profile."""

    def raw(t):
        return (np.asarray(f(t), dtype=float),
                np.asarray(fp(t), dtype=float),
                np.asarray(fpp(t), dtype=float))

    return WarpProfile(domain=(float(domain[0]), float(domain[1])), kind=kind,
                       raw_eval=raw, parity=dict(parity or {}))


def _auto_parity(domain, fn3_exact):
    """Tag endpoints of an analytic form where it vanishes (odd) or has a
    critical point (even); fn3_exact(t) -> (f, fp, fpp, fppp) scalars."""
    parity = {}
    for endpoint, tstar in (("left", domain[0]), ("right", domain[1])):
        f, fp, fpp, fppp = fn3_exact(tstar)
        scale = max(abs(f), abs(fp), 1e-300)
        if abs(f) <= 1e-12 * scale:
            parity[endpoint] = ParityTag("odd", order=2, coeffs=(fp, fppp))
        elif abs(fp) <= 1e-12 * scale:
            parity[endpoint] = ParityTag("even", order=2, coeffs=(f, fpp))
    return parity


def closed_form_profile(kind: str, domain, *, value: float = 1.0,
                        slope: float = 0.0, amplitude: float = 1.0,
                        omega: float = 1.0, phase: float = 0.0) -> WarpProfile:
    """One of the elementary profiles: constant ``value``, linear
    ``value + slope*t``, sine ``amplitude*sin(omega*t + phase)``, or the
    corresponding cosine.

    The form must be positive on the open interior of the domain (checked on
    a dense sample); it may vanish at an endpoint, which is then tagged as an
    odd smooth-closure point.
    """
    t0, t1 = float(domain[0]), float(domain[1])
    if not t1 > t0:
        raise InputError(f"empty domain [{t0}, {t1}]")

    if kind == "constant":
        a = float(value)

        def triple(t):
            t = np.asarray(t, dtype=float)
            return np.full_like(t, a), np.zeros_like(t), np.zeros_like(t)

        def exact(t):
            return a, 0.0, 0.0, 0.0
    elif kind == "linear":
        a, b = float(value), float(slope)

        def triple(t):
            t = np.asarray(t, dtype=float)
            return a + b * t, np.full_like(t, b), np.zeros_like(t)

        def exact(t):
            return a + b * t, b, 0.0, 0.0
    elif kind in ("sine", "cosine"):
        amp, w, ph = float(amplitude), float(omega), float(phase)
        if not amp > 0 or not w > 0:
            raise InputError("amplitude and omega must be positive")
        trig, cotrig, sign = ((np.sin, np.cos, 1.0) if kind == "sine"
                              else (np.cos, np.sin, -1.0))

        def triple(t):
            t = np.asarray(t, dtype=float)
            th = w * t + ph
            return (amp * trig(th), sign * amp * w * cotrig(th),
                    -amp * w ** 2 * trig(th))

        def exact(t):
            th = w * t + ph
            return (amp * float(trig(th)), sign * amp * w * float(cotrig(th)),
                    -amp * w ** 2 * float(trig(th)),
                    -sign * amp * w ** 3 * float(cotrig(th)))
    else:
        raise InputError(f"unknown closed form {kind!r}")

    probe = np.linspace(t0, t1, 4097)
    vals = triple(probe)[0]
    scale = float(np.max(np.abs(vals))) or 1.0
    if vals[1:-1].min() <= 0.0:
        raise InputError(f"{kind} profile is not positive on the interior of "
                         f"[{t0}, {t1}]")
    if vals[0] < -1e-12 * scale or vals[-1] < -1e-12 * scale:
        raise InputError(f"{kind} profile is negative at an endpoint")

    return WarpProfile(domain=(t0, t1), kind="closed-form", raw_eval=triple,
                       parity=_auto_parity((t0, t1), exact))


def solve_ivp_profile(rhs, f0: float, fp0: float, domain, tol: float, *,
                      closure_left: bool = False, f_floor: float = 1e-4,
                      fp_cap: float = 1e6) -> WarpProfile:
    """Profile defined by f'' = F(t, f, f') with adaptive error control.

    Dense output supplies (f, f', f'') anywhere in the domain, with f''
    recomputed from F. The solution must stay positive: by default f0 must be
    positive; ``closure_left`` instead accepts f0 = 0 with fp0 > 0 and tags
    the left endpoint as an odd closure point. Escape from positivity or a
    derivative blow-up raises DomainTruncationError carrying the reached t.
    """
    if not isinstance(rhs, OdeRhs):
        rhs = OdeRhs.from_callable(rhs)
    t0, t1 = float(domain[0]), float(domain[1])
    if closure_left:
        if f0 != 0.0 or not fp0 > 0:
            raise InputError("closure mode needs f0 = 0 and fp0 > 0")
    elif not f0 > 0:
        raise InputError(f"initial value must be positive, got {f0} "
                         "(use closure_left for a cone point)")
    sol = integrate_ivp(rhs, t0, t1, float(f0), float(fp0), tol,
                        f_floor=f_floor, fp_cap=fp_cap, on_truncate="raise")
    return _profile_from_solution(sol, tol, closure_left=closure_left)


def _profile_from_solution(sol: DenseSolution, tol: float, *,
                           closure_left: bool = False,
                           extra_meta: Optional[dict] = None) -> WarpProfile:
    parity = {}
    if closure_left:
        t0 = sol.t0
        delta = max(1e-6, 1e-9 * (sol.t_end - t0))
        c3 = sol.eval(t0 + delta)[2] / delta
        parity["left"] = ParityTag("odd", order=2, coeffs=(float(sol.fps[0]), c3))
    meta = {"tol": tol, "n_steps": len(sol.ts) - 1, "nfev": sol.nfev,
            "defect": sol.defect(), "rhs": sol.rhs.label}
    meta.update(extra_meta or {})
    return WarpProfile(domain=(sol.t0, sol.t_end), kind="ivp-solution",
                       raw_eval=lambda t: sol.eval(t), parity=parity,
                       solver_meta=meta)


def sha_yang_profiles(n: int, m: int, T: float, tol: float = 1e-10):
    """The pair (f, h) closing a cone over an Einstein factor into a complete
    non-negatively curved space, together with the exponent alpha = 2(n-1)/m.

    f solves f'' = (alpha/2) f^(-alpha-1) with f(0) = 1, f'(0) = 0, and
    h = (2/alpha) f', so h(0) = 0, h'(0) = 1: h is odd and f even at t = 0.
    The conserved quantity f'^2 - (1 - f^-alpha) is evaluated along the
    solution; its maximum must stay below 10*tol.
    """
    for name, v in (("n", n), ("m", m)):
        if not (isinstance(v, int) and not isinstance(v, bool)) or v < 2:
            raise InputError(f"{name} must be an integer >= 2, got {v!r}")
    if not T > 0:
        raise InputError(f"T must be positive, got {T}")
    if not tol > 0:
        raise InputError("tol must be positive")

    alpha = 2.0 * (n - 1) / m
    rhs = OdeRhs.power(alpha / 2.0, -alpha - 1.0)
    # integrate tighter than advertised so the first integral meets its bound;
    # cap the step so the dense output is second-derivative accurate (finite
    # differences of the interpolant are used as an oracle against it)
    sol = integrate_ivp(rhs, 0.0, T, 1.0, 0.0, tol / 8.0, h_max=0.25)

    grid = np.unique(np.concatenate([sol.ts, np.linspace(0.0, T, 4097)]))
    f, fp, _ = sol.eval(grid)
    residual = float(np.max(np.abs(fp ** 2 - (1.0 - f ** -alpha))))
    if residual > 10.0 * tol:
        raise IntegrationQualityError(
            f"first-integral residual {residual:.3e} exceeds {10 * tol:.3e}")

    f_profile = _profile_from_solution(
        sol, tol, extra_meta={"first_integral_residual": residual,
                              "alpha": alpha})
    f_profile = replace(
        f_profile,
        parity={"left": ParityTag("even", order=2, coeffs=(1.0, alpha / 2.0))})

    two_over_alpha = 2.0 / alpha

    def h_eval(t):
        fv, fpv, fppv = sol.eval(np.asarray(t, dtype=float))
        h = two_over_alpha * fpv
        hp = two_over_alpha * fppv
        hpp = -(alpha + 1.0) * fv ** (-alpha - 2.0) * fpv
        return h, hp, hpp

    h_profile = WarpProfile(
        domain=(0.0, sol.t_end), kind="ivp-solution", raw_eval=h_eval,
        parity={"left": ParityTag("odd", order=3,
                                  coeffs=(1.0, -alpha * (alpha + 1.0) / 2.0))},
        solver_meta={"tol": tol, "first_integral_residual": residual,
                     "alpha": alpha, "derived_from": "f via h = (2/alpha) f'"})
    return f_profile, h_profile, alpha


def closability_ode_profile(n: int, eps: float, tol: float = 1e-10) -> WarpProfile:
    """Solution of f'' = -f - (n-2)(1 + f'^2)/f, f(0) = 1, f'(0) = 0.

    Along the exact solution the expression -f''/f - (n-2)(1+f'^2)/f^2 equals
    1 identically. The solution collapses in finite time; if it escapes before
    ``eps`` the profile is truncated at 90% of the reached time, recorded in
    ``solver_meta``.
    """
    if not (isinstance(n, int) and not isinstance(n, bool)) or n < 3:
        raise InputError(f"n must be an integer >= 3, got {n!r}")
    if not eps > 0:
        raise InputError("eps must be positive")
    sol = integrate_ivp(OdeRhs.radial_floor(float(n - 2)), 0.0, eps, 1.0, 0.0,
                        tol / 8.0, on_truncate="return")
    truncated = not sol.completed
    eps_star = min(eps, 0.9 * sol.t_end) if truncated else eps
    profile = _profile_from_solution(
        sol, tol, extra_meta={"requested_eps": eps, "eps_star": eps_star,
                              "truncated": truncated})
    return replace(
        profile, domain=(0.0, eps_star),
        parity={"left": ParityTag("even", order=2, coeffs=(1.0, float(-(n - 1))))})


def radial_floor_value(profile: WarpProfile, n: int, t):
    """-f''/f - (n-2)(1+f'^2)/f^2: the fiber Ricci of dt^2 + f^2 g when the
    fiber sits at its curvature floor -(n-2); identically 1 along
    closability_ode_profile solutions."""
    f, fp, fpp = profile.eval(t)
    return -fpp / f - (n - 2) * (1.0 + fp ** 2) / f ** 2


def neck_profile(nu: float, s: float) -> WarpProfile:
    """sqrt(2)*sin(nu*t) on [s, pi/(4 nu)]: the neck warp whose outer slice
    has radius exactly 1 and principal curvature nu."""
    if not nu > 0:
        raise InputError(f"nu must be positive, got {nu}")
    t_out = math.pi / (4.0 * nu)
    if not 0.0 < s < t_out:
        raise InputError(f"s must lie in (0, {t_out}), got {s}")
    return closed_form_profile("sine", (s, t_out),
                               amplitude=math.sqrt(2.0), omega=nu)


def _flat_decay(x):
    """exp(-x^2/(1-x)) on [0, 1): value 1 and slope 0 at 0, strictly
    decreasing, all derivatives vanish at 1. Returns (w, w')."""
    x = np.asarray(x, dtype=float)
    w = np.zeros_like(x)
    wp = np.zeros_like(x)
    inside = x < 1.0
    xi = x[inside]
    with np.errstate(under="ignore"):
        wi = np.exp(-xi * xi / (1.0 - xi))
    w[inside] = wi
    wp[inside] = -wi * xi * (2.0 - xi) / (1.0 - xi) ** 2
    return w, wp


def k_profile(eps_prime: float) -> WarpProfile:
    """The circle warp closing the doubled region: k(0) = 0, k'(0) = 1,
    k'' < 0 on the interior, and k together with all its derivatives is flat
    at eps_prime (k(eps_prime) > 0, k', k'' vanish there).

    k' is a smooth monotone step built from an exp(-1/x)-type bump; k is its
    integral. All stated conditions are re-checked after construction and a
    violation raises ConstructionError rather than returning silently.
    """
    if not eps_prime > 0:
        raise InputError(f"eps_prime must be positive, got {eps_prime}")
    ep = float(eps_prime)
    W = CumulativeIntegral(lambda x: _flat_decay(x)[0], 0.0, 1.0)

    def triple(t):
        t = np.asarray(t, dtype=float)
        x = t / ep
        w, wp = _flat_decay(x)
        return ep * np.asarray(W(x), dtype=float), w, wp / ep

    k = WarpProfile(
        domain=(0.0, ep), kind="closed-form", raw_eval=triple,
        parity={"left": ParityTag("odd", order=2, coeffs=(1.0, -2.0 / ep ** 2)),
                "right": ParityTag("flat", order=3, coeffs=(ep * float(W(1.0)), 0.0))},
        solver_meta={"eps_prime": ep})

    # post-conditions; failing any is a construction bug, not a verdict
    kv0, kp0, kpp0 = k.eval(0.0)
    kvE, kpE, kppE = k.eval(ep)
    checks = [
        ("k(0) = 0", abs(kv0) <= 1e-12),
        ("k'(0) = 1", abs(kp0 - 1.0) <= 1e-12),
        ("k(eps') > 0", kvE > 0.0),
        ("|k'(eps')| <= 1e-10", abs(kpE) <= 1e-10),
        ("|k''(eps')| <= 1e-10", abs(kppE) <= 1e-10),
    ]
    ts = np.linspace(0.0, ep, 66)[1:-1]
    kpp = k.eval(ts)[2]
    checks.append(("k'' < 0 on the interior (64 samples)", bool((kpp < 0.0).all())))
    delta = 1e-3 * ep
    k3 = (k.raw_eval(np.array([delta]))[2][0] - kpp0) / delta
    checks.append(("k'''(0) < 0", k3 < 0.0))
    failed = [name for name, ok in checks if not ok]
    if failed:
        raise ConstructionError(f"k profile failed post-checks: {failed}")
    return k


def collar_profile(c: float, length: float = 2.0) -> WarpProfile:
    """Cylinder warp with f(0) = 1, f'(0) = 2c, f'' < 0 on [0, 1) and
    f' = c from t = 1 on, smooth across the transition.

    f' ramps from 2c down to c through a one-sided flat step, so the join at
    t = 1 is infinitely smooth; f is recovered by quadrature. ``length`` is
    the domain extent and must exceed the unit ramp.
    """
    if not c > 0:
        raise InputError(f"c must be positive, got {c}")
    if not length > 1.0:
        raise InputError(f"length must exceed the unit ramp, got {length}")
    cc = float(c)

    def phi(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > 0.0
        with np.errstate(under="ignore"):
            out[pos] = np.exp(1.0 - 1.0 / x[pos])
        return out

    def phi_prime(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > 0.0
        with np.errstate(under="ignore"):
            out[pos] = np.exp(1.0 - 1.0 / x[pos]) / x[pos] ** 2
        return out

    big_phi = CumulativeIntegral(phi, 0.0, 1.0)
    phi_total = float(big_phi(1.0))

    def triple(t):
        t = np.asarray(t, dtype=float)
        u = np.clip(1.0 - t, 0.0, 1.0)
        f = 1.0 + cc * t + cc * (phi_total - np.asarray(big_phi(u), dtype=float))
        fp = cc * (1.0 + phi(u))
        fpp = -cc * phi_prime(u)
        return f, fp, fpp

    prof = WarpProfile(domain=(0.0, float(length)), kind="closed-form",
                       raw_eval=triple, solver_meta={"c": cc, "ramp": 1.0})

    # C2 smoke check across the transition by central differences
    h = 1e-5
    for t in (1.0 - 3 * h, 1.0, 1.0 + 3 * h):
        f_m, f_0, f_p = (prof.eval(t + k * h)[0] for k in (-1, 0, 1))
        fp_fd = (f_p - f_m) / (2 * h)
        fpp_fd = (f_p - 2 * f_0 + f_m) / h ** 2
        _, fp_an, fpp_an = prof.eval(t)
        if abs(fp_fd - fp_an) > 1e-7 * max(1.0, cc) or \
           abs(fpp_fd - fpp_an) > 1e-4 * max(1.0, cc):
            raise ConstructionError("collar profile is not C2 at the transition")
    return prof


def docking_R_profile() -> WarpProfile:
    """Default sphere warp for the ambient double construction: sin(t) on
    [0, pi/2], odd at 0 with slope 1, even at pi/2, concave throughout."""
    return closed_form_profile("sine", (0.0, math.pi / 2.0))


def splice_profiles(p1: WarpProfile, p2: WarpProfile, tol: float) -> WarpProfile:
    """Join two profiles along a shared slice.

    The right end of p1 must coincide with the left end of p2 and the values
    and slopes must agree within tol; otherwise GlueMismatchError reports both
    sides. The second derivative may jump; the jump is recorded as a joint.
    """
    if not tol > 0:
        raise InputError("tol must be positive")
    J = p1.t1
    if abs(p2.t0 - J) > tol:
        raise InputError(
            f"profile domains are not adjacent: {p1.domain} then {p2.domain}")
    f1, fp1, fpp1 = p1.eval(J)
    f2, fp2, fpp2 = p2.eval(p2.t0)
    if abs(f1 - f2) > tol or abs(fp1 - fp2) > tol:
        raise GlueMismatchError(
            f"mismatch at t = {J}: left (f, f') = ({f1}, {fp1}), "
            f"right = ({f2}, {fp2}), tol = {tol}",
            left=(f1, fp1), right=(f2, fp2))

    lo2, hi2 = p2.domain

    def triple(t):
        t = np.asarray(t, dtype=float)
        left = t <= J
        f = np.empty_like(t)
        fp = np.empty_like(t)
        fpp = np.empty_like(t)
        if left.any():
            a, b, cdd = p1.eval(t[left])
            f[left], fp[left], fpp[left] = a, b, cdd
        if (~left).any():
            a, b, cdd = p2.eval(np.clip(t[~left], lo2, hi2))
            f[~left], fp[~left], fpp[~left] = a, b, cdd
        return f, fp, fpp

    parity = {}
    if "left" in p1.parity:
        parity["left"] = p1.parity["left"]
    if "right" in p2.parity:
        parity["right"] = p2.parity["right"]
    joints = p1.joints + (Joint(J, fpp2 - fpp1),) + p2.joints
    return WarpProfile(domain=(p1.t0, p2.t1), kind="spliced", raw_eval=triple,
                       parity=parity, joints=joints)


# normalized C-infinity bump on [-1, 1]
def _bump_raw(v):
    v = np.asarray(v, dtype=float)
    out = np.zeros_like(v)
    inside = np.abs(v) < 1.0
    with np.errstate(under="ignore"):
        out[inside] = np.exp(-1.0 / (1.0 - v[inside] ** 2))
    return out


_BUMP_NORM = 1.0 / adaptive_quad(_bump_raw, -1.0, 1.0, rtol=1e-13, atol=1e-16)
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(40)


def _bump(v):
    return _BUMP_NORM * _bump_raw(v)


def mollify_profile(p: WarpProfile, width: float) -> WarpProfile:
    """Smooth a spliced profile across its joints.

    Averages f against a normalized bump whose half-width tapers smoothly
    from width/2 at each joint to zero at distance ``width``, so the result
    is C2 across joints and *bit-identical* to p outside the width-windows.
    A profile without joints is returned unchanged.
    """
    if not width > 0:
        raise InputError("width must be positive")
    if not p.joints:
        return p
    t0, t1 = p.domain
    js = np.array([j.t for j in p.joints])
    if (np.minimum(js - t0, t1 - js) <= 2.0 * width).any():
        raise InputError("width must be below half the distance from every "
                         "joint to the domain boundary")
    if len(js) > 1 and np.diff(np.sort(js)).min() <= 2.0 * width:
        raise InputError("joints are closer than twice the mollification width")

    def delta_fn(u):
        # smooth half-width taper: width/2 at the joint, flat zero at |u| = 1
        u2 = u * u
        chi = math.exp(-u2 / (1.0 - u2)) if u2 < 1.0 else 0.0
        g = 2.0 * u / (1.0 - u2) ** 2 if u2 < 1.0 else 0.0
        gp = (2.0 / (1.0 - u2) ** 2 + 8.0 * u2 / (1.0 - u2) ** 3) if u2 < 1.0 else 0.0
        d = 0.5 * width * chi
        dp = -0.5 * chi * g
        dpp = 0.5 * chi * (g * g - gp) / width
        return d, dp, dpp

    def smooth_point(t, J):
        u = (t - J) / width
        d, dp, dpp = delta_fn(u)
        if d <= 0.0:
            return None
        vstar = (t - J) / d
        if -1.0 < vstar < 1.0:
            segs = ((-1.0, vstar), (vstar, 1.0))
        else:
            segs = ((-1.0, 1.0),)
        gf = gp = gpp = 0.0
        for a, b in segs:
            mid = 0.5 * (a + b)
            half = 0.5 * (b - a)
            v = mid + half * _GL_NODES
            wq = half * _GL_WEIGHTS * _bump(v)
            fv, fpv, fppv = p.eval(t - d * v)
            gf += float(np.dot(wq, fv))
            gp += float(np.dot(wq, fpv * (1.0 - dp * v)))
            gpp += float(np.dot(wq, fppv * (1.0 - dp * v) ** 2 - fpv * dpp * v))
        return gf, gp, gpp

    def triple(t):
        t = np.asarray(t, dtype=float)
        f, fp, fpp = (np.array(a, dtype=float, copy=True) for a in p.raw_eval(t))
        for J in js:
            mask = np.abs(t - J) < width
            if not mask.any():
                continue
            for i in np.nonzero(mask)[0]:
                out = smooth_point(float(t[i]), float(J))
                if out is not None:
                    f[i], fp[i], fpp[i] = out
        return f, fp, fpp

    return WarpProfile(domain=p.domain, kind="mollified", raw_eval=triple,
                       parity=dict(p.parity), joints=(),
                       solver_meta={"mollify_width": width,
                                    "healed_joints": [j.t for j in p.joints]})


@dataclass(frozen=True)
class ParityReport:
    """Measured endpoint parity conditions; failures are carried, not raised."""

    endpoint: str
    parity: str
    order: int
    conditions: tuple  # (name, residual, threshold, ok)
    passed: bool


def parity_check(p: WarpProfile, endpoint: str, parity: str, order: int = 2,
                 *, unit_slope: bool = False) -> ParityReport:
    """Measure the endpoint conditions for the claimed parity.

    odd: f(t*) = 0, and f''(t*) = 0 from order 2; with ``unit_slope`` also
    |f'(t*)| = 1 (the smooth-closure condition for a unit-sphere block).
    even: f'(t*) = 0; order 3 adds a one-sided estimate of f'''(t*) = 0.
    """
    if endpoint not in ("left", "right"):
        raise InputError("endpoint must be 'left' or 'right'")
    if parity not in ("odd", "even"):
        raise InputError("parity must be 'odd' or 'even'")
    if order not in (1, 2, 3):
        raise InputError("order must be 1, 2 or 3")
    tstar = p.t0 if endpoint == "left" else p.t1
    f, fp, fpp = p.eval(tstar)
    tol = 1e-10
    if p.solver_meta and "tol" in p.solver_meta:
        tol = max(tol, 100.0 * p.solver_meta["tol"])

    conditions = []
    if parity == "odd":
        conditions.append(("value", abs(f), tol))
        if unit_slope:
            conditions.append(("unit_slope", abs(abs(fp) - 1.0), tol))
        if order >= 2:
            conditions.append(("second_derivative", abs(fpp), tol))
    else:
        conditions.append(("slope", abs(fp), tol))
        if order >= 3:
            span = p.t1 - p.t0
            delta = min(1e-3 * span, 0.5 * EXCLUSION_WIDTH)
            inward = delta if endpoint == "left" else -delta
            fpp_in = p.raw_eval(np.array([tstar + inward]))[2][0]
            conditions.append(("third_derivative",
                               abs(fpp_in - fpp) / delta, max(1e-5, tol / delta)))
    rows = tuple((name, float(r), float(th), bool(r <= th))
                 for name, r, th in conditions)
    return ParityReport(endpoint=endpoint, parity=parity, order=order,
                        conditions=rows, passed=all(r[3] for r in rows))


def scale_profile(p: WarpProfile, R: float) -> WarpProfile:
    """The profile of the metric with distances divided by R:
    t -> f(R t)/R on domain/R."""
    if not R > 0:
        raise InputError(f"R must be positive, got {R}")
    if R == 1.0:
        return p

    def triple(t):
        f, fp, fpp = p.eval(np.asarray(t, dtype=float) * R)
        return f / R, fp, fpp * R

    parity = {}
    for end, tag in p.parity.items():
        if tag.kind == "odd":
            c1, c3 = tag.coeffs
            parity[end] = replace(tag, coeffs=(c1, c3 * R * R))
        else:
            c0, c2 = tag.coeffs
            parity[end] = replace(tag, coeffs=(c0 / R, c2 * R))
    joints = tuple(Joint(j.t / R, j.fpp_jump * R) for j in p.joints)
    return WarpProfile(domain=(p.t0 / R, p.t1 / R), kind=p.kind,
                       raw_eval=triple, parity=parity, joints=joints,
                       solver_meta=p.solver_meta)


def finite_difference_residual(p: WarpProfile, dt: float, n: int = 129) -> float:
    """Max |f'(t) - (f(t+dt) - f(t-dt))/(2 dt)| over an interior grid; the
    profile invariant requires this to be O(dt^2)."""
    t0, t1 = p.domain
    lo, hi = t0 + 2 * dt + EXCLUSION_WIDTH, t1 - 2 * dt - EXCLUSION_WIDTH
    if hi <= lo:
        lo, hi = t0 + 2 * dt, t1 - 2 * dt
    ts = np.linspace(lo, hi, n)
    f_hi = p.eval(ts + dt)[0]
    f_lo = p.eval(ts - dt)[0]
    fp = p.eval(ts)[1]
    return float(np.max(np.abs(fp - (f_hi - f_lo) / (2.0 * dt))))
