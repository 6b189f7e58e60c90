# Shared helpers for the oracle scripts: exact rationals and the textual
# element grammar used by the C++ tests:  sum := (+ term*),
# term := (mon coeff factor*), factor := (kind index power).

from fractions import Fraction

KINDS = ("x", "theta", "p", "pi", "dp", "dpi")
KIND_ORDER = {k: i for i, k in enumerate(KINDS)}


def frac_str(q):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def factor_key(f):
    kind, index, power = f
    return (KIND_ORDER[kind], index, power)


def term_str(coeff, factors):
    factors = sorted(factors, key=factor_key)
    parts = [f"(mon {frac_str(coeff)}"]
    for kind, index, power in factors:
        parts.append(f" ({kind} {index} {power})")
    parts.append(")")
    return "".join(parts)


def element_str(terms):
    """terms: iterable of (coeff, [(kind, index, power), ...]) with coeff != 0."""
    rows = sorted(
        ((sorted(fs, key=factor_key), Fraction(c)) for c, fs in terms if Fraction(c) != 0),
        key=lambda r: [factor_key(f) for f in r[0]],
    )
    if not rows:
        return "(+)"
    return "(+ " + " ".join(term_str(c, fs) for fs, c in rows) + ")"
