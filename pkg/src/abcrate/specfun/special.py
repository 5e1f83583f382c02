r"""Hand-rolled special functions: Gamma, modified Bessel K, Meijer G.

Everything the closed-form rate expressions need, without reaching for an
external special-function library:

* ``gamma_fn``/``lgamma_fn`` wrap the stdlib Gamma for positive reals.
* ``clgamma`` is a complex log-Gamma (Lanczos, g = 7, 9 terms) used on the
  Mellin--Barnes contour. Its imaginary part may be off by a multiple of
  2*pi (harmless under exp), the real part is accurate to ~1e-13 relative.
* ``bessel_k`` evaluates K_nu(x) by Temme's series for x < 2 and a
  Steed-style continued fraction for x >= 2, with upward recurrence in the
  order; relative error is ~1e-13 across the crossover.
* ``meijer_g`` integrates the Mellin--Barnes representation on a vertical
  contour separating the two pole families, entirely in the log domain so
  large parameter values cannot overflow. Only the three parameter classes
  used by the rate expressions are accepted.

All functions are pure; no module-level mutable state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DomainError",
    "UnsupportedClassError",
    "AccuracyError",
    "gamma_fn",
    "lgamma_fn",
    "clgamma",
    "bessel_k",
    "pdf_Z",
    "pdf_A",
    "MeijerSpec",
    "meijer_g",
    "meijer_g_ln",
]


class DomainError(ValueError):
    """Argument outside the documented domain of a special function."""


class UnsupportedClassError(ValueError):
    """Meijer-G parameter set outside the three supported classes."""


class AccuracyError(RuntimeError):
    """Quadrature could not certify the accuracy target.

    Carries the achieved ``estimate`` and its ``error_bound`` so callers can
    decide whether the degraded value is still usable.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


# --------------------------------------------------------------- Gamma


def gamma_fn(x: float) -> float:
    """Gamma function on the positive real axis.

    Raises:
        DomainError: for nonpositive or non-finite x, or x large enough to
            overflow double precision (x > 171.62).
    """
    if not (np.isfinite(x) and x > 0.0):
        raise DomainError(f"gamma_fn needs x > 0, got {x!r}")
    try:
        return math.gamma(x)
    except OverflowError as exc:
        raise DomainError(f"gamma_fn({x}) overflows double precision") from exc


def lgamma_fn(x: float) -> float:
    """Natural log of Gamma on the positive real axis."""
    if not (np.isfinite(x) and x > 0.0):
        raise DomainError(f"lgamma_fn needs x > 0, got {x!r}")
    return math.lgamma(x)


# Lanczos g = 7, 9-term coefficients (Godfrey's table); relative error of
# exp(clgamma) is ~1e-13 on the half-plane Re z >= 0.5.
_LANCZOS_G = 7.0
_LANCZOS_C = np.array(
    [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ]
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def clgamma(z: np.ndarray) -> np.ndarray:
    """Principal-branch-modulo-2*pi*i complex log-Gamma, vectorized.

    The imaginary part is NOT branch-corrected; use only where the result
    feeds an exponential. Points on the nonpositive real axis return inf.
    """
    z = np.asarray(z, dtype=np.complex128)
    refl = z.real < 0.5
    zz = np.where(refl, 1.0 - z, z)
    # series denominators are (z-1)+1 .. (z-1)+8 = z+0 .. z+7
    x = _LANCZOS_C[0] + np.sum(_LANCZOS_C[1:] / (zz[..., None] + np.arange(8)), axis=-1)
    t = zz + (_LANCZOS_G - 0.5)
    lg = _HALF_LOG_2PI + (zz - 0.5) * np.log(t) - t + np.log(x)
    if np.any(refl):
        with np.errstate(divide="ignore", invalid="ignore"):
            reflected = math.log(math.pi) - np.log(np.sin(np.pi * z)) - lg
        lg = np.where(refl, reflected, lg)
    return lg


# ------------------------------------------------------------- Bessel K

# Taylor coefficients of 1/Gamma(1+x) (DLMF 5.7.1/5.7.2 series); only the
# odd/even splits below are used, good to ~1e-16 for |x| <= 0.5.
_INV_GAMMA_A = (
    1.0000000000000000,
    0.5772156649015329,
    -0.6558780715202538,
    -0.0420026350340952,
    0.1665386113822915,
    -0.0421977345555443,
    -0.0096219715278770,
    0.0072189432466630,
    -0.0011651675918591,
    -0.0002152416741149,
    0.0001280502823882,
    -0.0000201348547807,
    -0.0000012504934821,
    0.0000011330272320,
    -0.0000002056338417,
    0.0000000061160950,
    0.0000000050020075,
    -0.0000000011812746,
    0.0000000001043427,
    0.0000000000077823,
    -0.0000000000036968,
    0.0000000000005100,
    -0.0000000000000206,
    -0.0000000000000054,
    0.0000000000000014,
    0.0000000000000001,
)


def _temme_gammas(mu: float):
    """gam1 = [1/G(1-mu) - 1/G(1+mu)]/(2 mu), gam2 = [1/G(1-mu) + 1/G(1+mu)]/2,
    plus 1/G(1+mu) and 1/G(1-mu), stable for |mu| <= 0.5."""
    mu2 = mu * mu
    g1 = 0.0
    g2 = 0.0
    pw = 1.0
    for k in range(0, len(_INV_GAMMA_A), 2):
        g2 += _INV_GAMMA_A[k] * pw
        if k + 1 < len(_INV_GAMMA_A):
            g1 += _INV_GAMMA_A[k + 1] * pw
        pw *= mu2
    gam1 = -g1
    gam2 = g2
    gampl = gam2 - mu * gam1  # 1/Gamma(1+mu)
    gammi = gam2 + mu * gam1  # 1/Gamma(1-mu)
    return gam1, gam2, gampl, gammi


_BESSEL_EPS = 1e-16
_BESSEL_MAXIT = 10000
_BESSEL_XMIN = 2.0


def _bessel_k_mu(mu: float, x: float, scaled: bool):
    """(K_mu(x), K_{mu+1}(x)) for |mu| <= 0.5, optionally scaled by e^x."""
    if x < _BESSEL_XMIN:
        # Temme's series around the origin
        x2 = 0.5 * x
        pimu = math.pi * mu
        fact = 1.0 if abs(pimu) < 1e-15 else pimu / math.sin(pimu)
        d = -math.log(x2)
        e = mu * d
        fact2 = 1.0 if abs(e) < 1e-15 else math.sinh(e) / e
        gam1, gam2, gampl, gammi = _temme_gammas(mu)
        ff = fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
        total = ff
        e = math.exp(e)
        p = 0.5 * e / gampl
        q = 0.5 / (e * gammi)
        c = 1.0
        d = x2 * x2
        total1 = p
        mu2 = mu * mu
        for i in range(1, _BESSEL_MAXIT + 1):
            ff = (i * ff + p + q) / (i * i - mu2)
            c *= d / i
            p /= i - mu
            q /= i + mu
            delt = c * ff
            total += delt
            total1 += c * (p - i * ff)
            if abs(delt) < abs(total) * _BESSEL_EPS:
                break
        else:  # pragma: no cover - series converges in < 40 terms for x < 2
            raise AccuracyError("Bessel-K series did not converge", total, abs(delt))
        kmu, kmu1 = total, total1 * (2.0 / x)
        if scaled:
            s = math.exp(x)
            kmu, kmu1 = kmu * s, kmu1 * s
        return kmu, kmu1

    # Steed/Thompson-Barnett continued fraction CF2 for x >= 2
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1 = 0.0
    q2 = 1.0
    a1 = 0.25 - mu * mu
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, _BESSEL_MAXIT + 1):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < _BESSEL_EPS:
            break
    else:  # pragma: no cover - CF2 converges in < 200 terms for x >= 2
        raise AccuracyError("Bessel-K continued fraction did not converge", s, abs(dels))
    h = a1 * h
    pref = math.sqrt(math.pi / (2.0 * x))
    if not scaled:
        # e^{-x} underflows past ~745; the result is indistinguishable from 0
        pref *= math.exp(-x) if x < 745.0 else 0.0
    kmu = pref / s
    kmu1 = kmu * (mu + x + 0.5 - h) / x
    return kmu, kmu1


def bessel_k(nu: float, x: float, scaled: bool = False) -> float:
    """Modified Bessel function of the second kind K_nu(x), nu >= 0, x > 0.

    Relative error <= 1e-10 (typically ~1e-13) for x in [1e-6, 700];
    underflows smoothly to 0 beyond. ``scaled=True`` returns e^x * K_nu(x),
    which stays representable out to arbitrarily large x.

    Raises:
        DomainError: x <= 0, nu < 0, or non-finite input.
    """
    if not (np.isfinite(x) and x > 0.0):
        raise DomainError(f"bessel_k needs x > 0, got {x!r}")
    if not (np.isfinite(nu) and nu >= 0.0):
        raise DomainError(f"bessel_k needs nu >= 0, got {nu!r}")
    nl = int(nu + 0.5)
    mu = nu - nl  # |mu| <= 0.5
    kmu, kmu1 = _bessel_k_mu(mu, x, scaled)
    # upward recurrence K_{m+1} = K_{m-1} + (2m/x) K_m, stable for K
    for j in range(nl):
        kmu, kmu1 = kmu1, kmu + (2.0 * (mu + j + 1) / x) * kmu1
    return kmu


# ------------------------------------------------------ channel densities


def pdf_Z(z: float) -> float:
    """Density of the despread direct-path power surrogate: (1/2) e^{-z/2}."""
    if not (np.isfinite(z) and z >= 0.0):
        raise DomainError(f"pdf_Z needs z >= 0, got {z!r}")
    return 0.5 * math.exp(-0.5 * z)


def pdf_A(a: float) -> float:
    """Density of the two-hop product-channel power: (1/2) K_0(sqrt(a)).

    Log-singular (integrably) at the origin, so the domain is open at 0;
    quadrature against this density must treat the endpoint.
    """
    if not (np.isfinite(a) and a > 0.0):
        raise DomainError(f"pdf_A needs a > 0, got {a!r}")
    return 0.5 * bessel_k(0.0, math.sqrt(a))


# ------------------------------------------------------------- Meijer G

_SUPPORTED_CLASSES = frozenset({(1, 2, 2, 2), (2, 0, 0, 2), (4, 1, 2, 4)})

# Mellin-Barnes trapezoid: initial step, number of step-halvings, block size
# for the truncated tail scan, and the relative-accuracy contract.
_MB_H0 = 0.05
_MB_MAX_HALVINGS = 4
_MB_BLOCK = 2048
_MB_MAX_TERMS = 400000
_MB_TRUNC_LN = math.log(1e-16)
_MB_TARGET_REL = 1e-8


@dataclass(frozen=True)
class MeijerSpec:
    """One Meijer-G evaluation request G^{m,n}_{p,q}(z | a_params; b_params).

    Only the three classes needed by the rate expressions are accepted:
    (1,2,2,2) for log kernels, (2,0,0,2) for Bessel kernels, (4,1,2,4) for
    the rate integrals.
    """

    m: int
    n: int
    p: int
    q: int
    a_params: tuple
    b_params: tuple
    z: float

    def __post_init__(self):
        if (self.m, self.n, self.p, self.q) not in _SUPPORTED_CLASSES:
            raise UnsupportedClassError(
                f"class (m,n,p,q)=({self.m},{self.n},{self.p},{self.q}) "
                f"not in {sorted(_SUPPORTED_CLASSES)}"
            )
        object.__setattr__(self, "a_params", tuple(float(v) for v in self.a_params))
        object.__setattr__(self, "b_params", tuple(float(v) for v in self.b_params))
        if len(self.a_params) != self.p or len(self.b_params) != self.q:
            raise UnsupportedClassError(
                f"parameter lists must have lengths p={self.p}, q={self.q}; "
                f"got {len(self.a_params)}, {len(self.b_params)}"
            )
        if not (np.isfinite(self.z) and self.z > 0.0):
            raise DomainError(f"meijer_g needs z > 0, got {self.z!r}")


def _mb_contour(spec: MeijerSpec) -> float:
    """Abscissa of a vertical contour separating the two pole families."""
    left = max(spec.a_params[: spec.n]) - 1.0 if spec.n else -math.inf
    right = min(spec.b_params[: spec.m])  # m >= 1 in every supported class
    if not left < right:
        raise UnsupportedClassError(
            f"no separating contour: max(a_n)-1 = {left} >= min(b_m) = {right}"
        )
    if math.isinf(left):
        return right - 0.5
    return 0.5 * (left + right)


def _mb_trapezoid(spec: MeijerSpec, s0: float, h: float):
    """One trapezoid pass; returns (signed sum, abs sum, log scale)."""
    a, b, m, n = spec.a_params, spec.b_params, spec.m, spec.n
    lnz = math.log(spec.z)

    def logf(t: np.ndarray) -> np.ndarray:
        s = s0 + 1j * t
        tot = s * lnz
        for j in range(m):
            tot = tot + clgamma(b[j] - s)
        for k in range(n):
            tot = tot + clgamma(1.0 - a[k] + s)
        for j in range(m, spec.q):
            tot = tot - clgamma(1.0 - b[j] + s)
        for k in range(n, spec.p):
            tot = tot - clgamma(a[k] - s)
        return tot

    wmax = -math.inf
    total = 0.0
    total_abs = 0.0
    k0 = 0
    while k0 < _MB_MAX_TERMS:
        t = h * np.arange(k0, k0 + _MB_BLOCK)
        lf = logf(t)
        bmax = float(np.max(lf.real))
        if bmax > wmax:
            scale = math.exp(wmax - bmax) if wmax > -math.inf else 0.0
            total *= scale
            total_abs *= scale
            wmax = bmax
        vals = np.exp(lf - wmax)
        re = vals.real.copy()
        if k0 == 0:
            re[0] *= 0.5  # trapezoid endpoint weight at t = 0
        total += float(np.sum(re))
        total_abs += float(np.sum(np.abs(re)))
        if bmax < wmax + _MB_TRUNC_LN:
            return total, total_abs, wmax
        k0 += _MB_BLOCK
    raise AccuracyError(
        f"Mellin-Barnes tail did not decay within {_MB_MAX_TERMS} nodes",
        estimate=total * math.exp(wmax) * h / math.pi,
        error_bound=math.inf,
    )


def meijer_g_ln(spec: MeijerSpec):
    """Log-scaled Meijer-G value: (sign, ln|G|, relative error estimate).

    The workhorse behind :func:`meijer_g`; exposed because the rate
    expressions divide by Gamma(N) and want to stay in the log domain.
    """
    s0 = _mb_contour(spec)
    prev = None  # (sign, ln_abs)
    err_rel = math.inf
    result = None
    h = _MB_H0
    for _ in range(_MB_MAX_HALVINGS + 1):
        total, total_abs, wmax = _mb_trapezoid(spec, s0, h)
        # cancellation floor: the sum cannot be trusted below eps * sum|f|
        cancel = np.finfo(float).eps * total_abs / abs(total) if total else math.inf
        sign = 1.0 if total > 0 else (-1.0 if total < 0 else 0.0)
        ln_abs = (
            wmax + math.log(abs(total) * h / math.pi) if total else -math.inf
        )
        if prev is not None:
            psign, pln = prev
            if sign == 0.0 or psign != sign:
                step_rel = math.inf if (sign or psign) else 0.0
            else:
                step_rel = abs(1.0 - math.exp(min(pln - ln_abs, 700.0)))
            err_rel = max(step_rel, cancel)
            result = (sign, ln_abs, err_rel)
            if step_rel <= max(_MB_TARGET_REL * 1e-3, 10 * cancel):
                break
        else:
            result = (sign, ln_abs, cancel)
        prev = (sign, ln_abs)
        h *= 0.5
    return result


def meijer_g(spec: MeijerSpec) -> float:
    """Evaluate one of the three supported Meijer-G classes at z > 0.

    Raises:
        UnsupportedClassError: parameter class outside the supported set or
            admitting no separating contour.
        AccuracyError: the contour quadrature could not certify ~1e-8
            relative accuracy (deep cancellation or non-decaying tail); the
            error carries the achieved estimate and its error bound.
    """
    sign, ln_abs, err_rel = meijer_g_ln(spec)
    value = sign * math.exp(ln_abs) if ln_abs < 709.0 else sign * math.inf
    if not err_rel <= _MB_TARGET_REL:
        raise AccuracyError(
            f"Meijer-G quadrature reached relative error {err_rel:.2e} "
            f"(target {_MB_TARGET_REL:.0e}) for class "
            f"({spec.m},{spec.n},{spec.p},{spec.q}) at z = {spec.z:g}",
            estimate=value,
            error_bound=err_rel * abs(value),
        )
    return value
