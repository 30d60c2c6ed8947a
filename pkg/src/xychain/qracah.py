"""q-Racah polynomials and the three-term contiguity data built on them.

Two families of contiguity relations are supported, tagged ``"qr13"`` and
``"qr24"``.  Each family supplies, for parameters ``(a, b, c, N, q)``:

* a pair of eigenvalue arrays ``lambda_plus(x)``, ``lambda_minus(x)`` on the
  grid ``x = 0..N``,
* six coefficient arrays ``phi_{+1,0,-1}^{+,-}`` indexed by the polynomial
  degree ``i = 0..N``,
* a parameter/grid shift map sending the base family to a companion family.

The defining property (certified by :func:`verify_contiguity`) is that the
polynomials at base parameters and at shifted parameters are connected by two
three-term relations whose coefficients are exactly these arrays.  The same
data later yields couplings and spectra of an open XY chain (module
:mod:`xychain.chain`).
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvalidParameterRegime, InvalidShiftedParams
from .qseries import phi43_terminating, phi43_terminating_exact
from .report import CheckReport

__all__ = [
    "FAMILIES",
    "QRacahParams",
    "ContiguityCoefficients",
    "grid_variable",
    "qracah_eval",
    "shift_params",
    "contiguity_coefficients",
    "closed_form_lambda_squared",
    "verify_contiguity",
]

#: Supported contiguity families (they differ in their shift maps and tables).
FAMILIES = ("qr13", "qr24")

#: Default tolerances for the relation / constraint certifications.
RELATION_TOL = 1e-9
CONSTRAINT_TOL = 1e-10

_RESIDUAL_FLOOR = 1e-30


@dataclass(frozen=True)
class QRacahParams:
    """Parameter record ``(a, b, c, N, q)`` for a q-Racah family.

    ``N`` is the truncation degree (grid is ``x = 0..N``); ``q`` must lie
    strictly inside ``(0, 1)``.
    """

    a: float
    b: float
    c: float
    N: int
    q: float

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or self.N < 1:
            raise InvalidParameterRegime(f"N must be an integer >= 1, got {self.N!r}")
        for name in ("a", "b", "c", "q"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise InvalidParameterRegime(f"parameter {name} must be finite, got {value!r}")
        if not 0.0 < self.q < 1.0:
            raise InvalidParameterRegime(
                f"q must lie strictly inside (0, 1), got {self.q!r}"
            )

    def as_tuple(self):
        return (self.a, self.b, self.c, self.N, self.q)


def grid_variable(x, params):
    """Grid value ``-(1 - q^{-x}) (1 - c q^{x-N})`` at grid point ``x``.

    The degree-``i`` member of the family is a polynomial of degree exactly
    ``i`` in this variable (certified by an interpolation test in the suite).
    """
    a, b, c, N, q = params.as_tuple()
    return -(1.0 - q ** (-x)) * (1.0 - c * q ** (x - N))


def qracah_eval(i, x, params):
    """Evaluate the degree-``i`` q-Racah polynomial at grid point ``x``.

    Defined as the terminating series with numerator parameters
    ``(a b q^{i+1}, q^{-x}, c q^{x-N})``, denominator parameters
    ``(a q, b c q, q^{-N})`` and argument ``q``.  ``x`` may lie off the
    integer grid (the series is defined for any real ``x``); ``i`` must stay
    within ``0..N`` for the series to make sense.

    On integer grid points the alternating sum is accumulated in exact
    rational arithmetic (the float parameters are represented exactly) and
    rounded once, so the result stays accurate at degrees where direct float
    accumulation would lose many digits to cancellation.  Off-grid arguments
    use the float evaluator.
    """
    a, b, c, N, q = params.as_tuple()
    if not 0 <= i <= N:
        raise ValueError(f"polynomial degree must satisfy 0 <= i <= N={N}, got {i}")
    if float(x).is_integer():
        xi = int(x)
        af, bf, cf, qf = Fraction(a), Fraction(b), Fraction(c), Fraction(q)
        return float(
            phi43_terminating_exact(
                i,
                (af * bf * qf ** (i + 1), qf ** (-xi), cf * qf ** (xi - N)),
                (af * qf, bf * cf * qf, qf ** (-N)),
                qf,
                qf,
            )
        )
    return phi43_terminating(
        i,
        (a * b * q ** (i + 1), q ** (-x), c * q ** (x - N)),
        (a * q, b * c * q, q ** (-N)),
        q,
        q,
    )


def _denominator_factors(params):
    """Factors that must stay away from zero for series/table evaluation.

    Returns a list of ``(label, value)`` pairs covering the series
    denominators ``(1 - a q^m)``, ``(1 - b c q^m)`` for ``m = 1..N`` and the
    table denominators ``(1 - a b q^m)`` for ``m = 0..2N+2``.
    """
    a, b, c, N, q = params.as_tuple()
    factors = []
    for m in range(1, N + 1):
        factors.append((f"1 - a q^{m}", 1.0 - a * q**m))
        factors.append((f"1 - b c q^{m}", 1.0 - b * c * q**m))
    ab = a * b
    for m in range(0, 2 * N + 3):
        factors.append((f"1 - a b q^{m}", 1.0 - ab * q**m))
    return factors


def _family_specific_factors(family, params):
    a, b, c, N, q = params.as_tuple()
    if family == "qr13":
        return [("1 - a", 1.0 - a), ("1 - b c", 1.0 - b * c)]
    return [
        ("a", a),
        ("b", b),
        ("1 - a", 1.0 - a),
        ("1 - b c q", 1.0 - b * c * q),
    ]


def _check_family(family):
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def shift_params(family, params):
    """Family shift map: returns ``(x_shift, shifted_params)``.

    ``qr13`` maps ``(a, b, c, N) -> (a/q, bq, c/q^2, N)`` with the grid
    shifted by one (``x -> x + 1``); ``qr24`` maps
    ``(a, b, c, N) -> (a/q, bq, c, N)`` with the grid unshifted.

    Raises
    ------
    InvalidShiftedParams
        If the shifted parameters violate the basic parameter invariants or
        make a series denominator vanish exactly.
    """
    _check_family(family)
    a, b, c, N, q = params.as_tuple()
    if family == "qr13":
        x_shift, shifted = 1, (a / q, b * q, c / q**2, N, q)
    else:
        x_shift, shifted = 0, (a / q, b * q, c, N, q)
    try:
        shifted_params = QRacahParams(*shifted)
    except InvalidParameterRegime as exc:
        raise InvalidShiftedParams(f"shifted parameters invalid: {exc}") from exc
    for label, value in _denominator_factors(shifted_params):
        if value == 0.0:
            raise InvalidShiftedParams(
                f"shifted parameters make denominator factor ({label}) vanish"
            )
    return x_shift, shifted_params


@dataclass
class ContiguityCoefficients:
    """Contiguity data for one family at one parameter point.

    ``phi_plus1_*``, ``phi_0_*``, ``phi_minus1_*`` are arrays over the degree
    index ``i = 0..N``; the suffix ``_plus``/``_minus`` selects which of the
    two three-term relations the coefficient belongs to, and the ``plus1 / 0 /
    minus1`` part is the degree offset of the polynomial it multiplies.
    ``lambda_plus``/``lambda_minus`` are the relation eigenvalues over the
    grid ``x = 0..N``.

    For family ``qr24`` two candidate formulas exist for ``phi_0_minus``; both
    are retained in ``phi_0_minus_variants`` and ``variant`` records which one
    is active (selection happens in :func:`contiguity_coefficients`).
    """

    family: str
    params: QRacahParams
    lambda_plus: np.ndarray
    lambda_minus: np.ndarray
    phi_plus1_plus: np.ndarray
    phi_0_plus: np.ndarray
    phi_minus1_plus: np.ndarray
    phi_plus1_minus: np.ndarray
    phi_0_minus: np.ndarray
    phi_minus1_minus: np.ndarray
    variant: str = "unique"
    phi_0_minus_variants: dict = field(default_factory=dict)

    def constraint_ratio_deviation(self):
        """Max deviation from 1 of the eight-factor consistency ratio.

        The ratio couples neighbouring degrees ``i`` and ``i+1`` of all six
        coefficient tables and must equal 1 identically for the chain
        construction to be consistent; evaluated for ``i = 0..N-1`` (at
        ``i = N`` it degenerates to 0/0 because the boundary coefficients
        vanish identically).
        """
        num = (
            self.phi_0_minus[:-1]
            * self.phi_plus1_plus[:-1]
            * self.phi_minus1_plus[1:]
            * self.phi_0_minus[1:]
        )
        den = (
            self.phi_0_plus[:-1]
            * self.phi_plus1_minus[:-1]
            * self.phi_minus1_minus[1:]
            * self.phi_0_plus[1:]
        )
        if np.any(den == 0.0):
            raise InvalidParameterRegime(
                "constraint ratio denominator vanishes; parameters degenerate"
            )
        return float(np.max(np.abs(num / den - 1.0)))


def _raw_tables(family, params):
    """Evaluate the printed coefficient tables (vectorized over i and x)."""
    a, b, c, N, q = params.as_tuple()
    i = np.arange(N + 1, dtype=float)
    x = np.arange(N + 1, dtype=float)
    ab = a * b
    if family == "qr13":
        lam_p = (1 - q ** (-x - 1)) * (1 - c * q ** (x - N - 1)) / ((1 - b * c) * (1 - a))
        lam_m = (1 - c * q**x) * (1 - q ** (N - x))
        up_p = (
            -(q**i)
            * (1 - q ** (i - N))
            * (1 - ab * q ** (i + 1))
            / ((1 - ab * q ** (2 * i + 1)) * (1 - ab * q ** (2 * i + 2)))
        )
        dn_p = (
            -(q ** (i - N - 1))
            * (1 - q**i)
            * (1 - ab * q ** (N + i + 1))
            / ((1 - ab * q ** (2 * i)) * (1 - ab * q ** (2 * i + 1)))
        )
        mid_p = -up_p - dn_p
        up_m = (
            (1 - q ** (N - i))
            * (1 - a * q**i)
            * (1 - a * q ** (i + 1))
            * (1 - ab * q ** (i + 1))
            * (1 - b * c * q**i)
            * (1 - b * c * q ** (i + 1))
            / ((1 - a) * (1 - b * c) * (1 - ab * q ** (2 * i + 1)) * (1 - ab * q ** (2 * i + 2)))
        )
        mid_m = (
            (1 - a * q**i)
            * (1 - b * q ** (i + 1))
            * (1 - b * c * q**i)
            * (a * q ** (i + 1) - c)
            / (q * (1 - a) * (1 - b * c) * (1 - ab * q ** (2 * i + 1)))
        ) * (
            q * (1 - q ** (N - i)) * (1 - ab * q ** (i + 1)) / (1 - ab * q ** (2 * i + 2))
            + (1 - q ** (-i)) * (1 - ab * q ** (N + i + 1)) / (1 - ab * q ** (2 * i))
        )
        dn_m = (
            (1 - q ** (-i))
            * (a * q**i - c)
            * (a * q ** (i + 1) - c)
            * (1 - b * q**i)
            * (1 - b * q ** (i + 1))
            * (1 - ab * q ** (N + i + 1))
            / (q * (1 - a) * (1 - b * c) * (1 - ab * q ** (2 * i)) * (1 - ab * q ** (2 * i + 1)))
        )
        variants = {}
    else:
        lam_p = (1 - a * q**x) * (c - a * q ** (N - x)) / (a * (1 - a))
        lam_m = (1 - b * c * q ** (x + 1)) * (1 - b * q ** (N - x + 1)) / (b * q * (1 - b * c * q))
        up_p = (
            -(q**N - q**i)
            * (1 - ab * q ** (i + 1))
            * (1 - b * c * q ** (i + 1))
            * (1 - b * c * q ** (i + 2))
            / ((1 - b * c * q) * (1 - ab * q ** (2 * i + 1)) * (1 - ab * q ** (2 * i + 2)))
        )
        dn_p = (
            -b
            * q
            * (1 - q**i)
            * (c - a * q ** (i - 1))
            * (c - a * q**i)
            * (1 - ab * q ** (N + i + 1))
            / (a * (1 - b * c * q) * (1 - ab * q ** (2 * i)) * (1 - ab * q ** (2 * i + 1)))
        )
        lam0_p = (1 - a) * (c - a * q**N) / (a * (1 - a))
        mid_p = lam0_p - up_p - dn_p
        up_m = (
            (1 - a * q**i)
            * (1 - a * q ** (i + 1))
            * (1 - ab * q ** (i + 1))
            * (q**i - q**N)
            / ((1 - a) * (1 - ab * q ** (2 * i + 1)) * (1 - ab * q ** (2 * i + 2)))
        )
        dn_m = (
            -a
            * (1 - q**i)
            * (1 - b * q**i)
            * (1 - b * q ** (i + 1))
            * (1 - ab * q ** (N + i + 1))
            / (b * q * (1 - a) * (1 - ab * q ** (2 * i)) * (1 - ab * q ** (2 * i + 1)))
        )
        lam0_m = (1 - b * c * q) * (1 - b * q ** (N + 1)) / (b * q * (1 - b * c * q))
        # Two candidate closed forms circulate for the middle "minus"
        # coefficient: one subtracting the "plus"-relation neighbours from
        # lambda_plus(0), one subtracting the "minus"-relation neighbours from
        # lambda_minus(0).  Only one satisfies the defining relation; the
        # caller selects by measured residual.
        variants = {
            "plus_offset": lam0_p - up_p - dn_p,
            "sum_rule": lam0_m - up_m - dn_m,
        }
        mid_m = variants["sum_rule"]
    return {
        "lambda_plus": lam_p,
        "lambda_minus": lam_m,
        "phi_plus1_plus": up_p,
        "phi_0_plus": mid_p,
        "phi_minus1_plus": dn_p,
        "phi_plus1_minus": up_m,
        "phi_0_minus": mid_m,
        "phi_minus1_minus": dn_m,
        "variants": variants,
    }


def closed_form_lambda_squared(family, params):
    """Squared single-particle eigenvalues, direct closed form, for j = 0..N.

    This is the product form written directly in the model parameters; it must
    agree with ``lambda_plus(j) * lambda_minus(j)`` identically (cross-checked
    in :func:`xychain.chain.analytic_spectrum`).
    """
    _check_family(family)
    a, b, c, N, q = params.as_tuple()
    j = np.arange(N + 1, dtype=float)
    if family == "qr13":
        return (
            (1 - c * q**j)
            * (1 - q ** (N - j))
            * (1 - q ** (-j - 1))
            * (1 - c * q ** (j - N - 1))
            / ((1 - b * c) * (1 - a))
        )
    return (
        (1 - a * q**j)
        * (c - a * q ** (N - j))
        * (1 - b * c * q ** (j + 1))
        * (1 - b * q ** (N - j + 1))
        / (a * b * q * (1 - a) * (1 - b * c * q))
    )


def _polynomial_grids(family, params):
    """Polynomial values on the base and shifted grids.

    Returns ``(base, shifted)`` where ``base[i, x] = R_i(x)`` at the base
    parameters and ``shifted[i, x] = R_i(x + x_shift)`` at the shifted
    parameters, for ``i, x = 0..N``.

    Both grids are evaluated in exact rational arithmetic from the (exactly
    represented) float parameters, with the parameter shift applied in the
    same arithmetic, then rounded to float once.  This matters twice over:
    the relation residuals computed from these grids compare the base and
    shifted families, which is an identity only when the shifted parameters
    are *exactly* ``(a/q, bq, ...)`` of the base ones, and the alternating
    series itself loses digits to cancellation as the degree grows (visible
    from N ~ 7 in direct float accumulation).
    """
    N = params.N
    # Validates the shifted regime and fixes the grid offset.
    x_shift, _ = shift_params(family, params)
    a, b, c, _, q = params.as_tuple()
    af, bf, cf, qf = Fraction(a), Fraction(b), Fraction(c), Fraction(q)
    if family == "qr13":
        sa, sb, sc = af / qf, bf * qf, cf / qf**2
    else:
        sa, sb, sc = af / qf, bf * qf, cf
    den_base = (af * qf, bf * cf * qf, qf ** (-N))
    den_shifted = (sa * qf, sb * sc * qf, qf ** (-N))
    base = np.empty((N + 1, N + 1))
    shifted = np.empty((N + 1, N + 1))
    for i in range(N + 1):
        ab_base = af * bf * qf ** (i + 1)
        ab_shifted = sa * sb * qf ** (i + 1)
        for x in range(N + 1):
            base[i, x] = float(
                phi43_terminating_exact(
                    i, (ab_base, qf ** (-x), cf * qf ** (x - N)), den_base, qf, qf
                )
            )
            xs = x + x_shift
            shifted[i, x] = float(
                phi43_terminating_exact(
                    i, (ab_shifted, qf ** (-xs), sc * qf ** (xs - N)), den_shifted, qf, qf
                )
            )
    return base, shifted


def _grids_for(coeffs):
    """Cached `(base, shifted)` polynomial grids for a coefficient record."""
    grids = getattr(coeffs, "_grids", None)
    if grids is None:
        grids = _polynomial_grids(coeffs.family, coeffs.params)
        coeffs._grids = grids
    return grids


def _relation_residuals(coeffs, base, shifted, phi_0_minus=None):
    """Elementwise relative residuals of the two three-term relations.

    Returns two ``(N+1, N+1)`` arrays indexed ``[i, x]``.  Boundary terms with
    out-of-range degree carry identically vanishing coefficients and are
    omitted (never evaluating a degree ``N+1`` polynomial).
    """
    mid_m = coeffs.phi_0_minus if phi_0_minus is None else phi_0_minus

    def three_term(up, mid, dn, table):
        rhs = mid[:, None] * table
        mags = np.abs(rhs)
        contrib = up[:-1, None] * table[1:]
        rhs[:-1] += contrib
        mags[:-1] = np.maximum(mags[:-1], np.abs(contrib))
        contrib = dn[1:, None] * table[:-1]
        rhs[1:] += contrib
        mags[1:] = np.maximum(mags[1:], np.abs(contrib))
        return rhs, mags

    lhs = coeffs.lambda_plus[None, :] * base
    rhs, mags = three_term(
        coeffs.phi_plus1_plus, coeffs.phi_0_plus, coeffs.phi_minus1_plus, shifted
    )
    scale = np.maximum(np.maximum(np.abs(lhs), mags), _RESIDUAL_FLOOR)
    res_plus = np.abs(lhs - rhs) / scale

    lhs = coeffs.lambda_minus[None, :] * shifted
    rhs, mags = three_term(coeffs.phi_plus1_minus, mid_m, coeffs.phi_minus1_minus, base)
    scale = np.maximum(np.maximum(np.abs(lhs), mags), _RESIDUAL_FLOOR)
    res_minus = np.abs(lhs - rhs) / scale
    return res_plus, res_minus


def _boundary_mask(family, N):
    """Grid mask of points included in the relation certification.

    For family ``qr13`` the top corner ``(i, x) = (N, N)`` is excluded: the
    three-term truncation drops the degree-``N+1`` term whose coefficient
    vanishes identically, but at that single grid point the dropped
    coefficient-times-polynomial product has a finite nonzero limit (the
    polynomial value diverges there on the shifted grid).  Every quantity
    derived from the tables weights that point by ``lambda_minus(N) = 0``, so
    the construction is unaffected; see the README limitations section.
    """
    mask = np.ones((N + 1, N + 1), dtype=bool)
    if family == "qr13":
        mask[N, N] = False
    return mask


def contiguity_coefficients(family, params, variant="auto"):
    """Build the full contiguity data for a family at a parameter point.

    Parameters
    ----------
    family : str
        ``"qr13"`` or ``"qr24"``.
    params : QRacahParams
    variant : str
        Only meaningful for ``qr24``, which has two candidate formulas for
        ``phi_0_minus``: ``"auto"`` (default) selects the one with the smaller
        measured relation residual, ``"sum_rule"`` / ``"plus_offset"`` force a
        choice.

    Raises
    ------
    InvalidParameterRegime
        If a structural denominator vanishes exactly or a table entry is not
        finite.
    """
    _check_family(family)
    for label, value in _family_specific_factors(family, params) + _denominator_factors(params):
        if value == 0.0:
            raise InvalidParameterRegime(f"denominator factor ({label}) vanishes")
    raw = _raw_tables(family, params)
    variants = raw.pop("variants")
    coeffs = ContiguityCoefficients(
        family=family,
        params=params,
        variant="unique",
        phi_0_minus_variants=variants,
        **raw,
    )
    for name in (
        "lambda_plus",
        "lambda_minus",
        "phi_plus1_plus",
        "phi_0_plus",
        "phi_minus1_plus",
        "phi_plus1_minus",
        "phi_0_minus",
        "phi_minus1_minus",
    ):
        values = getattr(coeffs, name)
        if not np.all(np.isfinite(values)):
            raise InvalidParameterRegime(f"coefficient table {name} has non-finite entries")
    if family == "qr24":
        if variant == "auto":
            coeffs.variant = _select_variant(coeffs)
        elif variant in variants:
            coeffs.variant = variant
        else:
            raise ValueError(f"unknown variant {variant!r}")
        coeffs.phi_0_minus = variants[coeffs.variant]
    elif variant not in ("auto", "unique"):
        raise ValueError(f"family {family} has a unique phi_0_minus; got variant={variant!r}")
    return coeffs


def _select_variant(coeffs):
    """Pick the ``phi_0_minus`` variant with the smaller relation residual."""
    base, shifted = _grids_for(coeffs)
    mask = _boundary_mask(coeffs.family, coeffs.params.N)
    best = None
    for name, column in coeffs.phi_0_minus_variants.items():
        _, res_minus = _relation_residuals(coeffs, base, shifted, phi_0_minus=column)
        worst = float(np.max(res_minus[mask]))
        if best is None or worst < best[1]:
            best = (name, worst)
    return best[0]


def verify_contiguity(family, params, relation_tol=RELATION_TOL,
                      constraint_tol=CONSTRAINT_TOL, coeffs=None):
    """Certify the contiguity data against direct polynomial evaluation.

    Evaluates both three-term relations at every grid point ``(i, x)`` by
    computing each side from scratch with :func:`qracah_eval`, plus the
    eight-factor consistency ratio, and returns a :class:`CheckReport`.
    """
    if coeffs is None:
        coeffs = contiguity_coefficients(family, params)
    base, shifted = _grids_for(coeffs)
    mask = _boundary_mask(family, params.N)
    res_plus, res_minus = _relation_residuals(coeffs, base, shifted)

    report = CheckReport(title=f"contiguity {family} {params.as_tuple()}")
    note = "" if mask.all() else "corner (i,x)=(N,N) excluded; weighted by lambda_minus(N)=0"
    report.add("relation-plus", np.max(res_plus[mask]), relation_tol, note)
    report.add("relation-minus", np.max(res_minus[mask]), relation_tol, note)
    report.add("constraint-ratio", coeffs.constraint_ratio_deviation(), constraint_tol)
    if coeffs.family == "qr24":
        rejected = [v for v in coeffs.phi_0_minus_variants if v != coeffs.variant]
        _, res_rej = _relation_residuals(
            coeffs, base, shifted, phi_0_minus=coeffs.phi_0_minus_variants[rejected[0]]
        )
        report.add_note(
            f"phi_0_minus variant: {coeffs.variant} "
            f"(rejected {rejected[0]}: residual {np.max(res_rej[mask]):.2e})"
        )
    return report
