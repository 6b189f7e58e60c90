#!/usr/bin/env python3
# Oracle for iterated simplex integrals: computes
#   I(a, b) = int_{0 < u < w < 1} u^a w^b du dw
# by honest nested sympy integration and freezes the values for the C++ tests.
# Also emits a couple of rank-1 and rank-3 moments used as spot checks.

import sympy as sp
from pathlib import Path

u, w, v = sp.symbols("u w v", positive=True)

rows = []
for a in range(0, 6):
    for b in range(0, 6):
        val = sp.integrate(sp.integrate(u**a * w**b, (u, 0, w)), (w, 0, 1))
        val = sp.nsimplify(val)
        rows.append((a, b, sp.Rational(val)))

# closed form cross-check: 1/((a+1)(a+b+2))
for a, b, val in rows:
    assert val == sp.Rational(1, (a + 1) * (a + b + 2)), (a, b, val)

extra = []
for a in range(0, 4):
    val = sp.integrate(u**a, (u, 0, 1))
    extra.append((1, (a,), sp.Rational(val)))
# rank 3: int_{0<u<v<w<1} u^a v^b w^c
for (a, b, c) in [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (2, 0, 1)]:
    val = sp.integrate(
        sp.integrate(sp.integrate(u**a * v**b * w**c, (u, 0, v)), (v, 0, w)), (w, 0, 1)
    )
    extra.append((3, (a, b, c), sp.Rational(val)))

out = Path(__file__).resolve().parents[2] / "tests" / "oracle" / "expected_simplex.inc"
with open(out, "w") as f:
    f.write("// Generated by tools/oracles/simplex_moments.py. Do not edit by hand.\n")
    f.write("struct SimplexMoment2 { int a; int b; const char* value; };\n")
    f.write("inline const SimplexMoment2 kSimplexMoments2[] = {\n")
    for a, b, val in rows:
        f.write(f'    {{{a}, {b}, "{val}"}},\n')
    f.write("};\n\n")
    f.write("struct SimplexMomentN { int rank; int exps[3]; const char* value; };\n")
    f.write("inline const SimplexMomentN kSimplexMomentsN[] = {\n")
    for rank, exps, val in extra:
        e = list(exps) + [0] * (3 - len(exps))
        f.write(f'    {{{rank}, {{{e[0]}, {e[1]}, {e[2]}}}, "{val}"}},\n')
    f.write("};\n")
print(f"wrote {out} ({len(rows)} + {len(extra)} rows)")
