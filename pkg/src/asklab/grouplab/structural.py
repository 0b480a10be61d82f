"""Class numbers from ask values instead of enumeration."""

from asklab.errors import NonIntegral, NotAlternating
from asklab.exactcore import field_for
from asklab.modrep import alternating_hull, ask, is_alternating, knuth_dual


class FormulaMismatch(AssertionError):
    """Two formulas that must agree produced different numbers."""


def _as_int(value, what):
    if value.denominator != 1:
        raise NonIntegral(f"{what} = {value} is not an integer")
    return value.numerator


def class_count_structural(theta, q, kind, budget=None):
    """Class number of the Baer or Heisenberg group of theta over F_q.

    baer: q^e * ask(theta).  heisenberg: q^e * ask(Lambda(theta)), checked
    against q^(l - d + e) * ask(2nd power of the dual).
    """
    F = field_for(q)
    l, d, e = theta.shape
    if kind == "baer":
        if not is_alternating(theta):
            raise NotAlternating(f"{theta!r} is not alternating")
        return _as_int(ask(theta, F.pp, budget=budget).scaled(e), "q^e ask(theta)")
    if kind == "heisenberg":
        via_hull = _as_int(ask(alternating_hull(theta), F.pp, budget=budget).scaled(e), "hull form")
        via_dual = _as_int(
            ask(knuth_dual(theta), F.pp, m=2, budget=budget).scaled(l - d + e), "dual form"
        )
        if via_hull != via_dual:
            raise FormulaMismatch(f"hull form {via_hull} != dual form {via_dual} at q={F.q}")
        return via_hull
    raise ValueError(f"unknown kind {kind!r}")


