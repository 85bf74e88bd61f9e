"""Structural isomorphisms between cycloids: duality and shears."""

from cycloids import CycloidSpec, dual, isomorphic, shear, synthesize, validate_mapping

spec = CycloidSpec(3, 2, 1, 4)
for other in (dual(spec), CycloidSpec(2, 3, 1, 4)):
    a, b = synthesize(spec), synthesize(other)
    rep = isomorphic(a, b)
    print(f"{spec} ~ {other}: {rep.holds}", rep.witness.get("reason", ""))
    if rep.holds:
        assert validate_mapping(a, b, rep.witness["mapping"]) == []
        for x, y in list(sorted(rep.witness["mapping"].items()))[:4]:
            print(f"    {x} -> {y}")

spec = CycloidSpec(2, 3, 4, 6)
sheared = shear(spec, 1, "reduce_gamma")
print(f"{spec} ~ {sheared}: {isomorphic(synthesize(spec), synthesize(sheared)).holds}")
