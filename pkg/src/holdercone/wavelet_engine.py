"""Periodized orthonormal wavelet analysis on [0,1].

Compactly supported filters with S vanishing moments drive a decimated
cascade on dyadic samples; per-level coefficient suprema feed decay-slope
regressions and sup-scale norm estimates.  Boundary-corrected interval
bases are not implemented: analysis restricted to the interior mask is
used wherever wrap-around coefficients would contaminate a decay rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateFit,
    RangeError,
    RegularityMismatch,
    ResolutionError,
    SingularPoint,
    UnsupportedOrder,
)
from .function_model import GridFunction, evaluate_array, sample
from .holder_analysis import flat_norm, holder_seminorm
from .root_calculus import critical_level

# Orthonormal lowpass filters (extremal phase), sum h = sqrt(2), 2S taps.
# Recomputed from the product-filter factorization and checked against the
# orthonormality and moment identities by build_basis on every call.
DAUBECHIES_LOWPASS = {
    1: (
        0.7071067811865476, 0.7071067811865476,
    ),
    2: (
        0.48296291314453416, 0.8365163037378079,
        0.2241438680420134, -0.12940952255126037,
    ),
    3: (
        0.33267055295008263, 0.8068915093110925,
        0.45987750211849154, -0.13501102001025458,
        -0.08544127388202666, 0.03522629188570953,
    ),
    4: (
        0.2303778133088965, 0.7148465705529157,
        0.6308807679298589, -0.027983769416859854,
        -0.18703481171909309, 0.030841381835560764,
        0.0328830116668852, -0.010597401785069032,
    ),
    5: (
        0.16010239797419293, 0.6038292697971896,
        0.7243085284377729, 0.13842814590132074,
        -0.24229488706638203, -0.032244869584638375,
        0.07757149384004572, -0.006241490212798274,
        -0.012580751999081999, 0.0033357252854737712,
    ),
    6: (
        0.11154074335010947, 0.49462389039845306,
        0.7511339080210954, 0.31525035170919763,
        -0.22626469396543983, -0.12976686756726194,
        0.09750160558732304, 0.027522865530305727,
        -0.03158203931748603, 0.0005538422011614961,
        0.004777257510945511, -0.0010773010853084796,
    ),
    7: (
        0.07785205408500918, 0.3965393194819173,
        0.7291320908462351, 0.4697822874051931,
        -0.14390600392856498, -0.22403618499387498,
        0.07130921926683026, 0.08061260915108308,
        -0.03802993693501441, -0.01657454163066688,
        0.01255099855609984, 0.0004295779729213665,
        -0.0018016407040474908, 0.00035371379997452024,
    ),
    8: (
        0.05441584224310401, 0.31287159091429995,
        0.6756307362972898, 0.5853546836542067,
        -0.015829105256349306, -0.2840155429615469,
        0.0004724845739132828, 0.12874742662047847,
        -0.017369301001807547, -0.044088253930794755,
        0.013981027917398282, 0.008746094047405777,
        -0.004870352993451574, -0.00039174037337694705,
        0.0006754494064505693, -0.00011747678412476953,
    ),
    9: (
        0.038077947363878345, 0.24383467461259034,
        0.6048231236901112, 0.6572880780513005,
        0.13319738582500756, -0.2932737832791749,
        -0.09684078322297646, 0.14854074933810638,
        0.03072568147933338, -0.06763282906132997,
        0.00025094711483145197, 0.022361662123679096,
        -0.004723204757751397, -0.00428150368246343,
        0.0018476468830562265, 0.00023038576352319597,
        -0.0002519631889427101, 3.93473203162716e-05,
    ),
    10: (
        0.026670057900555554, 0.1881768000776915,
        0.5272011889317256, 0.6884590394536035,
        0.2811723436605775, -0.24984642432731538,
        -0.19594627437737705, 0.12736934033579325,
        0.09305736460357235, -0.07139414716639708,
        -0.029457536821875813, 0.033212674059341,
        0.0036065535669561697, -0.010733175483330575,
        0.001395351747052901, 0.001992405295185056,
        -0.0006858566949597116, -0.00011646685512928545,
        9.358867032006959e-05, -1.3264202894521244e-05,
    ),
}

BOUNDARY_MODES = ("interior_only", "periodized")

_ORTHO_TOL = 1e-10
_MOMENT_TOL = 1e-10
# detail sups below this multiple of the scaling magnitude are noise
_COEFF_NOISE_FACTOR = 1e-12


def highpass_from_lowpass(h: np.ndarray) -> np.ndarray:
    L = len(h)
    return np.array([(-1) ** n * h[L - 1 - n] for n in range(L)])


def _validate_filter(h: np.ndarray, S: int) -> None:
    L = 2 * S
    if abs(h.sum() - math.sqrt(2)) > 1e-12:
        raise AssertionError("lowpass does not sum to sqrt(2)")
    if abs(np.dot(h, h) - 1.0) > _ORTHO_TOL:
        raise AssertionError("lowpass not unit-norm")
    for m in range(1, S):
        if abs(np.dot(h[: -2 * m], h[2 * m :])) > _ORTHO_TOL:
            raise AssertionError(f"shift-{2*m} orthonormality violated")
    g = highpass_from_lowpass(h)
    # moments on the normalized abscissa n/(L-1); equivalent to raw monomial
    # moments (any degree < S polynomial is annihilated) but free of the
    # float cancellation that raw n**i sums hit for large S
    t = np.arange(L) / (L - 1)
    for i in range(S):
        if abs(np.sum(t**i * g)) > _MOMENT_TOL:
            raise AssertionError(f"highpass moment {i} does not vanish")


@dataclass(frozen=True)
class WaveletBasis:
    """Orthonormal filter pair with ``order`` vanishing moments."""

    order: int
    lowpass: tuple
    support_length: float
    boundary_mode: str

    @property
    def lowpass_array(self) -> np.ndarray:
        return np.asarray(self.lowpass)

    @property
    def highpass_array(self) -> np.ndarray:
        return highpass_from_lowpass(self.lowpass_array)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "lowpass": list(self.lowpass),
            "support_length": self.support_length,
            "boundary_mode": self.boundary_mode,
        }


def build_basis(S: int, boundary_mode: str = "periodized") -> WaveletBasis:
    """Filter pair of length 2S with S vanishing moments (extremal phase).

    The embedded constants are re-validated against the orthonormality and
    moment identities on every call rather than trusted blindly.
    """
    if not isinstance(S, int) or not 1 <= S <= 10:
        raise UnsupportedOrder(f"wavelet order {S} outside [1, 10]")
    if boundary_mode not in BOUNDARY_MODES:
        raise ValueError(f"boundary_mode must be one of {BOUNDARY_MODES}")
    h = np.asarray(DAUBECHIES_LOWPASS[S])
    _validate_filter(h, S)
    return WaveletBasis(
        order=S,
        lowpass=tuple(float(v) for v in h),
        support_length=float(2 * S - 1),
        boundary_mode=boundary_mode,
    )


@dataclass
class WaveletDecomposition:
    """Coefficients of the periodized cascade, organized by level.

    ``detail_coeffs[j]`` holds the 2**j coefficients of level j for
    J_coarse <= j < J_max; ``interior_mask[j]`` flags coefficients whose
    support [k 2**-j, (k + 2S - 1) 2**-j] stays inside [0,1] (no wrap).
    """

    basis: WaveletBasis
    J_max: int
    J_coarse: int
    scaling_coeffs: np.ndarray
    detail_coeffs: dict
    interior_mask: dict

    @property
    def levels(self) -> range:
        return range(self.J_coarse, self.J_max)

    def coefficient_noise_floor(self) -> float:
        scale = float(np.max(np.abs(self.scaling_coeffs))) if len(self.scaling_coeffs) else 0.0
        return _COEFF_NOISE_FACTOR * scale


def _analysis_step(a: np.ndarray, h: np.ndarray, g: np.ndarray):
    N = len(a)
    idx = (2 * np.arange(N // 2)[:, None] + np.arange(len(h))[None, :]) % N
    aw = a[idx]
    return aw @ h, aw @ g


def decompose(grid: GridFunction, basis: WaveletBasis, J_coarse: int) -> WaveletDecomposition:
    """Cascade the dyadic samples of ``grid`` down to level ``J_coarse``.

    The initial coefficients are the samples scaled by 2**(-J/2), a
    first-order quadrature for the finest-level scaling products; the x=1
    sample is dropped (it wraps onto x=0 in the periodization).
    """
    if J_coarse < 0 or grid.level < J_coarse + 4:
        raise ResolutionError(
            f"need grid level >= J_coarse + 4, got level {grid.level}, J_coarse {J_coarse}"
        )
    h = basis.lowpass_array
    g = basis.highpass_array
    S = basis.order
    a = grid.array[:-1] * 2.0 ** (-grid.level / 2)
    details = {}
    masks = {}
    for j in range(grid.level, J_coarse, -1):
        a, d = _analysis_step(a, h, g)
        k = np.arange(2 ** (j - 1))
        details[j - 1] = d
        masks[j - 1] = k + 2 * S - 1 <= 2 ** (j - 1)
    return WaveletDecomposition(
        basis=basis,
        J_max=grid.level,
        J_coarse=J_coarse,
        scaling_coeffs=a,
        detail_coeffs=details,
        interior_mask=masks,
    )


def reconstruct(dec: WaveletDecomposition) -> np.ndarray:
    """Invert the cascade; returns the 2**J_max periodized samples."""
    h = dec.basis.lowpass_array
    g = dec.basis.highpass_array
    L = len(h)
    a = dec.scaling_coeffs
    for j in range(dec.J_coarse, dec.J_max):
        d = dec.detail_coeffs[j]
        N = 2 * len(a)
        idx = (2 * np.arange(len(a))[:, None] + np.arange(L)[None, :]) % N
        contrib = h[None, :] * a[:, None] + g[None, :] * d[:, None]
        a = np.bincount(idx.ravel(), weights=contrib.ravel(), minlength=N)
    return a * 2.0 ** (dec.J_max / 2)


def synthesize_unit(dec_template: WaveletDecomposition, level: int, k: int) -> np.ndarray:
    """Samples of one basis vector: all coefficients zero except (level, k)."""
    zero = WaveletDecomposition(
        basis=dec_template.basis,
        J_max=dec_template.J_max,
        J_coarse=dec_template.J_coarse,
        scaling_coeffs=np.zeros_like(dec_template.scaling_coeffs),
        detail_coeffs={j: np.zeros_like(d) for j, d in dec_template.detail_coeffs.items()},
        interior_mask=dec_template.interior_mask,
    )
    zero.detail_coeffs[level][k] = 1.0
    return reconstruct(zero)


def level_sup(dec: WaveletDecomposition, j: int, interior_only: bool) -> float:
    """max_k |coefficient| at level j, optionally restricted to the interior mask."""
    if j not in dec.detail_coeffs:
        raise RangeError(f"level {j} outside [{dec.J_coarse}, {dec.J_max - 1}]")
    vals = np.abs(dec.detail_coeffs[j])
    if interior_only:
        vals = vals[dec.interior_mask[j]]
    return float(vals.max()) if vals.size else 0.0


@dataclass
class DecaySlopeFit:
    """Least-squares fit of log2(level sup) against the level index."""

    j_lo: int
    j_hi: int
    levels: list
    level_sups: list
    excluded_levels: list
    slope: float
    intercept: float
    r_squared: float
    regularity_estimate: float
    interior_only: bool

    def to_json(self) -> dict:
        return {
            "j_lo": self.j_lo,
            "j_hi": self.j_hi,
            "levels": self.levels,
            "level_sups": self.level_sups,
            "excluded_levels": self.excluded_levels,
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "regularity_estimate": self.regularity_estimate,
            "interior_only": self.interior_only,
        }


def decay_fit(
    dec: WaveletDecomposition, j_lo: int, j_hi: int, interior_only: bool = True
) -> DecaySlopeFit:
    """Fit log2 of the per-level suprema; regularity estimate is -slope - 1/2.

    Levels whose sup sits at the coefficient noise floor are excluded and
    reported; fewer than 4 usable levels raises DegenerateFit.  The two
    finest levels are customarily left out of [j_lo, j_hi] (quadrature
    noise); that choice is the caller's, via j_hi.
    """
    if j_hi - j_lo < 3:
        raise DegenerateFit(f"need j_hi - j_lo >= 3, got [{j_lo}, {j_hi}]")
    if j_lo < dec.J_coarse or j_hi >= dec.J_max:
        raise RangeError(
            f"fit range [{j_lo}, {j_hi}] outside levels [{dec.J_coarse}, {dec.J_max - 1}]"
        )
    noise = dec.coefficient_noise_floor()
    levels, sups, excluded = [], [], []
    all_sups = []
    for j in range(j_lo, j_hi + 1):
        s = level_sup(dec, j, interior_only)
        all_sups.append(s)
        if s > noise:
            levels.append(j)
            sups.append(s)
        else:
            excluded.append(j)
    if len(levels) < 4:
        raise DegenerateFit(
            f"only {len(levels)} usable levels in [{j_lo}, {j_hi}] (excluded: {excluded})"
        )
    ys = np.log2(np.asarray(sups))
    slope, intercept = np.polyfit(levels, ys, 1)
    resid = ys - (slope * np.asarray(levels) + intercept)
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 if ss_tot < 1e-30 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return DecaySlopeFit(
        j_lo=j_lo,
        j_hi=j_hi,
        levels=levels,
        level_sups=all_sups,
        excluded_levels=excluded,
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r2,
        regularity_estimate=float(-slope - 0.5),
        interior_only=interior_only,
    )


def besov_norm_estimate(dec: WaveletDecomposition, s: float) -> float:
    """max scaling coefficient plus sup_j 2**(j(s+1/2)) * level sup.

    Detail sups are taken over interior coefficients only: wrap-around
    coefficients see the periodization jump at {0,1} and would otherwise
    dominate the weighted sup for any s > 0.
    """
    if s <= 0:
        raise ValueError("s must be positive")
    scaling = float(np.max(np.abs(dec.scaling_coeffs))) if len(dec.scaling_coeffs) else 0.0
    weighted = 0.0
    for j in dec.levels:
        weighted = max(weighted, 2.0 ** (j * (s + 0.5)) * level_sup(dec, j, True))
    return scaling + weighted


@dataclass
class DecayCheckReport:
    """Per-level ratios of measured sups against a theoretical decay bound."""

    levels: list
    ratios: list
    max_ratio: float
    details: dict = field(default_factory=dict)


def classical_decay_check(
    f, beta: float, basis: WaveletBasis, J: int, j_lo: int = 4, j_hi: int | None = None
) -> DecayCheckReport:
    """Ratios level_sup(j) * 2**(j(beta+1/2)) / holder_seminorm over interior levels.

    The vanishing-moment mechanism bounds these by a constant when the
    smoothness index is below the wavelet order.
    """
    if beta >= basis.order:
        raise RegularityMismatch(f"need beta < S, got beta={beta}, S={basis.order}")
    dec = decompose(sample(f, J), basis, min(j_lo, 4))
    if j_hi is None:
        j_hi = J - 3
    semi = holder_seminorm(f, beta, J).value
    noise = dec.coefficient_noise_floor()
    levels, ratios = [], []
    for j in range(j_lo, j_hi + 1):
        sup = level_sup(dec, j, True)
        if semi <= 0:
            r = 0.0 if sup <= noise else math.inf
        else:
            r = sup * 2.0 ** (j * (beta + 0.5)) / semi
        levels.append(j)
        ratios.append(r)
    mx = max(ratios) if ratios else 0.0
    return DecayCheckReport(
        levels=levels, ratios=ratios, max_ratio=mx, details={"holder_seminorm": semi}
    )


def prop_decay_check(
    f,
    alpha: float,
    beta: float,
    basis: WaveletBasis,
    J: int,
    x0: float | None = None,
    j_lo: int = 4,
    j_hi: int | None = None,
) -> DecayCheckReport:
    """Coefficient bounds for f**alpha: global decay and local-value decay.

    Global mode compares interior level sups of f**alpha against
    norm**alpha * 2**(-j(alpha*beta+1/2)).  With ``x0`` given, levels at
    and beyond the critical level additionally compare coefficients whose
    support covers x0 against (norm / f(x0)**(1-alpha)) * 2**(-(j/2)(2beta+1)).
    """
    norm = flat_norm(f, beta, J)
    if not math.isfinite(norm):
        raise ValueError("flat norm must be finite for decay bounds")
    if j_hi is None:
        j_hi = J - 3
    S = basis.order
    grid = sample(f, J)
    root_vals = np.asarray(grid.values) ** alpha
    dec = decompose(GridFunction(level=J, values=tuple(root_vals)), basis, min(j_lo, 4))

    levels, ratios = [], []
    for j in range(j_lo, j_hi + 1):
        sup = level_sup(dec, j, True)
        bound = norm**alpha * 2.0 ** (-j * (alpha * beta + 0.5))
        levels.append(j)
        ratios.append(sup / bound)
    report = DecayCheckReport(
        levels=levels,
        ratios=ratios,
        max_ratio=max(ratios) if ratios else 0.0,
        details={"flat_norm": norm, "mode": "global"},
    )

    if x0 is not None:
        fx0 = float(evaluate_array(f, np.array([x0]), 0)[0])
        if fx0 <= 0:
            raise SingularPoint(f"f({x0}) = 0: local bound unavailable")
        jc = critical_level(f, beta, x0, basis.support_length, norm)
        loc_levels, loc_ratios = [], []
        for j in range(max(j_lo, int(jc)), j_hi + 1):
            k = np.arange(2**j)
            covers = (k * 2.0**-j <= x0) & (x0 <= (k + 2 * S - 1) * 2.0**-j)
            covers &= dec.interior_mask[j]
            if not covers.any():
                continue
            sup = float(np.max(np.abs(dec.detail_coeffs[j][covers])))
            bound = norm / fx0 ** (1.0 - alpha) * 2.0 ** (-(j / 2.0) * (2.0 * beta + 1.0))
            loc_levels.append(j)
            loc_ratios.append(sup / bound)
        report.details.update(
            {
                "critical_level": jc,
                "x0": x0,
                "f_x0": fx0,
                "local_levels": loc_levels,
                "local_ratios": loc_ratios,
                "local_max_ratio": max(loc_ratios) if loc_ratios else 0.0,
            }
        )
    return report


def export_decomposition_csv(dec: WaveletDecomposition, path) -> None:
    """Write all coefficients as rows (j, k, coefficient, interior); scaling rows use j = -1."""
    with open(path, "w", newline="") as fh:
        fh.write("j,k,coefficient,interior\n")
        for k, c in enumerate(dec.scaling_coeffs):
            fh.write(f"-1,{k},{format(c, '.17g')},1\n")
        for j in dec.levels:
            mask = dec.interior_mask[j]
            for k, c in enumerate(dec.detail_coeffs[j]):
                fh.write(f"{j},{k},{format(c, '.17g')},{int(mask[k])}\n")
