"""Flow polynomials with natural coefficients over place variables.

A polynomial is kept as a tuple of monomials ``(coefficient, exponents)``
where ``exponents`` is a shortlex-sorted tuple of ``(place, power)``.
Monomials with equal exponents are merged; zero coefficients are dropped.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping

from .multiset import shortlex

Exponents = tuple[tuple[str, int], ...]


def _norm_exps(exps: Mapping[str, int] | Iterable[tuple[str, int]]) -> Exponents:
    items = exps.items() if isinstance(exps, Mapping) else exps
    acc: dict[str, int] = {}
    for p, e in items:
        if e < 0:
            raise ValueError(f"negative exponent for {p!r}")
        if e:
            acc[p] = acc.get(p, 0) + e
    return tuple(sorted(acc.items(), key=lambda pe: shortlex(pe[0])))


def _mono_order(mono: tuple[int, Exponents]) -> tuple:
    _, exps = mono
    degree = sum(e for _, e in exps)
    return (-degree, tuple((shortlex(p), -e) for p, e in exps))


class FlowPolynomial:
    """Element of N[S], immutable and hashable.

    >>> P = FlowPolynomial([(2, {"p1": 2}), (1, {"p2": 1})])
    >>> P.evaluate({"p1": 2, "p2": 1})
    9
    """

    __slots__ = ("monomials", "_hash")

    def __init__(self, monomials: Iterable[tuple[int, Mapping[str, int] | Exponents]] = ()):
        acc: dict[Exponents, int] = {}
        for coef, exps in monomials:
            if not isinstance(coef, int) or coef < 0:
                raise ValueError(f"coefficient must be a natural number, got {coef!r}")
            key = _norm_exps(exps)
            acc[key] = acc.get(key, 0) + coef
        monos = [(c, e) for e, c in acc.items() if c]
        monos.sort(key=_mono_order)
        self.monomials: tuple[tuple[int, Exponents], ...] = tuple(monos)
        self._hash = hash(self.monomials)

    @classmethod
    def constant(cls, value: int) -> FlowPolynomial:
        return cls([(value, ())])

    @classmethod
    def variable(cls, place: str) -> FlowPolynomial:
        return cls([(1, ((place, 1),))])

    def is_constant(self) -> bool:
        return all(not exps for _, exps in self.monomials)

    def is_zero(self) -> bool:
        return not self.monomials

    @property
    def constant_term(self) -> int:
        for c, exps in self.monomials:
            if not exps:
                return c
        return 0

    def variables(self) -> frozenset[str]:
        return frozenset(p for _, exps in self.monomials for p, _ in exps)

    def evaluate(self, m: Mapping[str, int]) -> int:
        total = 0
        get = m.get
        for coef, exps in self.monomials:
            term = coef
            for p, e in exps:
                term *= get(p, 0) ** e
                if not term:
                    break
            total += term
        return total

    __call__ = evaluate

    def __add__(self, other: FlowPolynomial) -> FlowPolynomial:
        return FlowPolynomial(self.monomials + other.monomials)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FlowPolynomial):
            return self.monomials == other.monomials
        if isinstance(other, int):
            return self == FlowPolynomial.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def render(self) -> str:
        """Normal-form text accepted back by :func:`hdanets.ingest.parse_poly`."""
        if not self.monomials:
            return "0"
        parts = []
        for coef, exps in self.monomials:
            factors = [p for p, e in exps for _ in range(e)]
            if not factors:
                parts.append(str(coef))
            elif coef == 1:
                parts.append("*".join(factors))
            else:
                parts.append("*".join([str(coef)] + factors))
        return " + ".join(parts)

    __str__ = render

    def __repr__(self) -> str:
        return f"FlowPolynomial({self.render()!r})"


def eval_poly(P: FlowPolynomial, m: Mapping[str, int]) -> int:
    """Evaluate ``P`` at marking ``m``; absent places count as zero."""
    return P.evaluate(m)


def as_poly(value: FlowPolynomial | int | str) -> FlowPolynomial:
    """Coerce an int, polynomial text, or polynomial to a :class:`FlowPolynomial`."""
    if isinstance(value, FlowPolynomial):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a flow weight")
    if isinstance(value, int):
        if value < 0:
            raise ValueError(f"negative arc weight {value}")
        return FlowPolynomial.constant(value)
    if isinstance(value, str):
        from .ingest import parse_poly

        return parse_poly(value)
    raise TypeError(f"cannot interpret {value!r} as a flow polynomial")
