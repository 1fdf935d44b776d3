"""Exact rational polynomial arithmetic and characteristic polynomials.

Everything here is exact: rationals are arbitrary precision, complex
rationals keep real and imaginary parts separate, and polynomials in the
formal perturbation parameter store a sparse exponent -> coefficient map.
The characteristic polynomial of an exact operator matrix is obtained with
the Le Verrier-Faddeev trace recursion

    p_0 = -1,   p_k = -(1/k) * sum_{j=1..k} s_j p_{k-j},   s_k = tr(M^k),

which yields the coefficients of  chi(lambda) = -sum_k p_{M-k} lambda^k.
The equivalent monic convention det(lambda I - M) has lambda^{M-k}
coefficient equal to -p_k; both are exposed because sign mistakes between
the two forms are easy to make and painful to debug.
"""

from __future__ import annotations

from dataclasses import dataclass, field

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as Rational

__all__ = [
    "Rational",
    "rat",
    "GaussianRational",
    "ParamPoly",
    "CharPoly",
    "faddeev_leverrier",
    "charpoly_of_tridiagonal",
    "lowest_power",
    "verify_trace_structure",
    "realness_check",
    "TraceStructureReport",
]

_ZERO = Rational(0)
_ONE = Rational(1)


def rat(value, den=None):
    """Coerce to an exact rational.

    Accepts ints, rationals, strings like ``"-3/4"`` or ``"0.125"``, and
    floats (converted exactly, i.e. as the dyadic rational the float is).
    """
    if den is not None:
        return Rational(value) / Rational(den)
    if isinstance(value, str):
        s = value.strip()
        if "/" in s:
            num, d = s.split("/")
            return Rational(int(num)) / Rational(int(d))
        return parse_exact_decimal(s)
    if isinstance(value, float):
        from fractions import Fraction

        f = Fraction(value)  # exact binary expansion
        return Rational(f.numerator) / Rational(f.denominator)
    return Rational(value)


def parse_exact_decimal(text: str):
    """Parse a decimal string into the exact rational it denotes.

    ``"0.1"`` becomes 1/10 (not the nearest double). Exponent notation
    ``"2.5e-3"`` is supported.
    """
    s = text.strip().lower()
    exp = 0
    if "e" in s:
        s, e = s.split("e")
        exp = int(e)
    sign = 1
    if s.startswith(("+", "-")):
        sign = -1 if s[0] == "-" else 1
        s = s[1:]
    if "." in s:
        whole, frac = s.split(".")
    else:
        whole, frac = s, ""
    if not (whole + frac).isdigit() or (whole + frac) == "":
        raise ValueError(f"not a decimal literal: {text!r}")
    num = int(whole + frac) if whole + frac else 0
    den = 10 ** len(frac)
    value = Rational(sign * num) / Rational(den)
    if exp > 0:
        value *= Rational(10) ** exp
    elif exp < 0:
        value /= Rational(10) ** (-exp)
    return value


class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is type(_ZERO) else rat(re)
        self.im = im if type(im) is type(_ZERO) else rat(im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        return self.re == other and not self.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other):
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        if not self.im and not other.im:  # hot path: real times real
            return GaussianRational(self.re * other.re, _ZERO)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other):
        n2 = other.re * other.re + other.im * other.im
        if not n2:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / n2,
            (self.im * other.re - self.re * other.im) / n2,
        )

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def scale(self, r):
        return GaussianRational(self.re * r, self.im * r)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def render(self):
        """Human-readable exact form, e.g. ``-4645/2`` or ``(1 + 3/2i)``."""
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re} {sign} {abs(self.im)}i)"


GR_ZERO = GaussianRational()
GR_ONE = GaussianRational(1)


class ParamPoly:
    """Sparse univariate polynomial in the formal perturbation parameter.

    Coefficients are GaussianRational; zero coefficients are never stored,
    so ``bool(p)`` is False exactly for the zero polynomial.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        if coeffs is None:
            self.coeffs = {}
        else:
            self.coeffs = {e: c for e, c in coeffs.items() if c}

    @classmethod
    def const(cls, value):
        g = value if isinstance(value, GaussianRational) else GaussianRational(value)
        p = cls.__new__(cls)
        p.coeffs = {0: g} if g else {}
        return p

    @classmethod
    def monomial(cls, exponent, value=GR_ONE):
        g = value if isinstance(value, GaussianRational) else GaussianRational(value)
        p = cls.__new__(cls)
        p.coeffs = {int(exponent): g} if g else {}
        return p

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, ParamPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __add__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        p = ParamPoly.__new__(ParamPoly)
        p.coeffs = out
        return p

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        p = ParamPoly.__new__(ParamPoly)
        p.coeffs = {e: -c for e, c in self.coeffs.items()}
        return p

    def __mul__(self, other):
        out: dict[int, GaussianRational] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                prod = c1 * c2
                s = out.get(e)
                s = prod if s is None else s + prod
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        p = ParamPoly.__new__(ParamPoly)
        p.coeffs = out
        return p

    def scale(self, g: GaussianRational):
        if not g:
            return ParamPoly()
        p = ParamPoly.__new__(ParamPoly)
        p.coeffs = {e: c * g for e, c in self.coeffs.items()}
        return p

    def shift(self, n: int):
        """Multiply by parameter**n."""
        p = ParamPoly.__new__(ParamPoly)
        p.coeffs = {e + n: c for e, c in self.coeffs.items()}
        return p

    @property
    def degree(self):
        return max(self.coeffs) if self.coeffs else -1

    def lowest_power(self):
        """Return (exponent, coefficient) of the lowest-order term.

        Raises ValueError on the zero polynomial; the Newton diagram treats
        that case as an absent point.
        """
        if not self.coeffs:
            raise ValueError("zero polynomial has no lowest power")
        a = min(self.coeffs)
        return a, self.coeffs[a]

    def is_real(self):
        return all(not c.im for c in self.coeffs.values())

    def substitute(self, value) -> GaussianRational:
        """Evaluate exactly at a rational (or GaussianRational) value."""
        g = value if isinstance(value, GaussianRational) else GaussianRational(value)
        acc = GR_ZERO
        for e, c in self.coeffs.items():
            term = c
            if e:
                pw = GR_ONE
                base = g
                n = e
                while n:  # binary powering
                    if n & 1:
                        pw = pw * base
                    base = base * base
                    n >>= 1
                term = c * pw
            acc = acc + term
        return acc

    def __complex__(self):
        if not self.coeffs:
            return 0j
        if set(self.coeffs) != {0}:
            raise ValueError("non-constant polynomial has no complex value")
        return complex(self.coeffs[0])

    def render(self, symbol="c"):
        """Render as a sum of ``num/den * symbol^e`` terms, ascending in e."""
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            mag = c.render()
            term = mag if e == 0 else f"{mag} * {symbol}^{e}"
            parts.append(term)
        text = parts[0]
        for term in parts[1:]:
            if term.startswith("-"):
                text += " - " + term[1:]
            else:
                text += " + " + term
        return text

    def __repr__(self):
        return f"ParamPoly({self.render()})"


@dataclass
class CharPoly:
    """Characteristic polynomial with exact parameter-polynomial coefficients.

    ``paper_coeffs[k]`` is p_k in chi(lambda) = -sum_k p_{M-k} lambda^k with
    p_0 = -1; ``traces[k]`` caches s_k = tr(M^k) (index 0 unused).
    """

    dim: int
    paper_coeffs: list
    traces: list
    param: str = "c"

    def __post_init__(self):
        if len(self.paper_coeffs) != self.dim + 1:
            raise ValueError("need p_0..p_M")
        p0 = self.paper_coeffs[0]
        if p0 != ParamPoly.const(GaussianRational(-1)):
            raise ValueError("paper normalization requires p_0 = -1")

    def monic_coefficients(self):
        """Coefficients of det(lambda I - M), ascending in lambda power."""
        M = self.dim
        return [-self.paper_coeffs[M - j] for j in range(M + 1)]

    def monic_at(self, value):
        """Monic coefficients (ascending) as complex numbers at a parameter value."""
        return [complex(p.substitute(value)) for p in self.monic_coefficients()]

    def evaluate_exact(self, lam: GaussianRational, value) -> GaussianRational:
        """chi(lam) in the monic convention, all arithmetic exact."""
        coeffs = self.monic_coefficients()
        acc = GR_ZERO
        for g in reversed(coeffs):
            acc = acc * lam + g.substitute(value)
        return acc

    def realness_check(self) -> bool:
        return all(p.is_real() for p in self.paper_coeffs)

    def newton_identity_traces(self):
        """Recompute s_k from the final p_k via Newton's identities.

        s_k = k p_k + sum_{j=1..k-1} s_j p_{k-j}; used as an exact
        cross-check of the cached traces.
        """
        M = self.dim
        p = self.paper_coeffs
        s = [None] * (M + 1)
        for k in range(1, M + 1):
            acc = p[k].scale(GaussianRational(k))
            for j in range(1, k):
                acc = acc + s[j] * p[k - j]
            s[k] = acc
        return s

    def render_paper(self):
        return [f"p[{k}] = {p.render(self.param)}" for k, p in enumerate(self.paper_coeffs)]

    def render_monic(self):
        coeffs = self.monic_coefficients()
        return [
            f"lambda^{j}: {coeffs[j].render(self.param)}" for j in range(self.dim, -1, -1)
        ]


def faddeev_leverrier(matrix) -> CharPoly:
    """Exact Le Verrier-Faddeev characteristic polynomial of an exact matrix.

    Traces of exact matrix powers feed the recursion
    p_k = -(1/k) sum_{j<=k} s_j p_{k-j}. Only exact operator matrices are
    accepted; float matrices must go through the numerical eigensolver.
    """
    if getattr(matrix, "entry_kind", None) != "exact":
        raise TypeError("faddeev_leverrier requires an exact operator matrix")
    M = matrix.dim
    s = [None] * (M + 1)
    power = matrix
    for k in range(1, M + 1):
        s[k] = power.trace()
        if k < M:
            power = power.matmul(matrix)
    p = [None] * (M + 1)
    p[0] = ParamPoly.const(GaussianRational(-1))
    for k in range(1, M + 1):
        acc = ParamPoly()
        for j in range(1, k + 1):
            acc = acc + s[j] * p[k - j]
        p[k] = acc.scale(GaussianRational(Rational(-1) / Rational(k)))
    return CharPoly(dim=M, paper_coeffs=p, traces=s, param=matrix.param or "c")


def charpoly_of_tridiagonal(matrix) -> CharPoly:
    """Characteristic polynomial of an exact tridiagonal matrix.

    Uses the determinant continuant D_j = (lambda - a_j) D_{j-1} -
    b_{j-1} c_{j-1} D_{j-2}, which is much cheaper than the trace recursion
    for parameter-free tridiagonal matrices. Traces are filled in through
    Newton's identities so the cache stays consistent with the
    Faddeev-LeVerrier convention (the two routes are cross-checked in the
    test suite).
    """
    if getattr(matrix, "entry_kind", None) != "exact":
        raise TypeError("charpoly_of_tridiagonal requires an exact operator matrix")
    M = matrix.dim
    E = matrix.entries
    for i in range(M):
        for j in range(M):
            if abs(i - j) > 1 and E[i][j]:
                raise ValueError("matrix is not tridiagonal")
    # D polynomials in lambda, coefficients are ParamPoly
    d_prev = [ParamPoly.const(GR_ONE)]
    d_cur = [-E[0][0], ParamPoly.const(GR_ONE)]
    for j in range(1, M):
        a = E[j][j]
        nxt = [ParamPoly() for _ in range(len(d_cur) + 1)]
        for i, coeff in enumerate(d_cur):
            nxt[i + 1] = nxt[i + 1] + coeff
            nxt[i] = nxt[i] - coeff * a
        off = E[j - 1][j] * E[j][j - 1]
        if off:
            for i, coeff in enumerate(d_prev):
                nxt[i] = nxt[i] - coeff * off
        d_prev, d_cur = d_cur, nxt
    # d_cur[j] is the monic lambda^j coefficient; p_k = -monic[M-k]
    p = [-d_cur[M - k] for k in range(M + 1)]
    partial = CharPoly(dim=M, paper_coeffs=p, traces=[None] * (M + 1), param=matrix.param or "c")
    partial.traces = partial.newton_identity_traces()
    return partial


def lowest_power(p: ParamPoly):
    """Lowest-order term of a parameter polynomial as (exponent, coefficient)."""
    return p.lowest_power()


def realness_check(charpoly: CharPoly) -> bool:
    """True iff every coefficient of every p_k has zero imaginary part."""
    return charpoly.realness_check()


@dataclass
class TraceStructureReport:
    """Observed (j, coefficient) decomposition of traces and coefficients.

    For the quadratic perturbation at the unfolding point, every monomial of
    s_k and p_k must carry the parameter power k - 2j with 0 <= j <= k//3;
    ``trace_terms[k]`` and ``coeff_terms[k]`` list the observed (j, coeff)
    pairs.
    """

    dim: int
    trace_terms: dict = field(default_factory=dict)
    coeff_terms: dict = field(default_factory=dict)


def verify_trace_structure(charpoly: CharPoly) -> TraceStructureReport:
    """Assert the k - 2j exponent law on every s_k and p_k.

    A violation signals an arithmetic bug in the exact pipeline, so it is a
    hard assertion failure, not a soft report.
    """
    report = TraceStructureReport(dim=charpoly.dim)

    def decompose(poly: ParamPoly, k: int, label: str):
        terms = []
        allowed = {k - 2 * j: j for j in range(k // 3 + 1) if k - 2 * j >= 0}
        for e, coeff in sorted(poly.coeffs.items()):
            assert e in allowed, (
                f"{label}_{k} contains parameter power {e}; "
                f"allowed powers are {sorted(allowed)}"
            )
            terms.append((allowed[e], coeff))
        return terms

    for k in range(1, charpoly.dim + 1):
        if charpoly.traces[k] is not None:
            report.trace_terms[k] = decompose(charpoly.traces[k], k, "s")
        report.coeff_terms[k] = decompose(charpoly.paper_coeffs[k], k, "p")
    return report
