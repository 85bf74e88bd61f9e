"""Backward foldings: classes, bf-paths, and when folding stays safe."""

from cycloids import (
    SBCLASS,
    CycloidSpec,
    FoldSpec,
    attach_regular_labels,
    backward_fold,
    bf_path,
    check_liveness,
    check_safety,
    find_state,
    fold_classes,
    initial_marking,
    reachability,
    synthesize,
)

spec = CycloidSpec(3, 2, 1, 4)
base = attach_regular_labels(synthesize(spec))
for c in fold_classes(spec, FoldSpec.total(spec.beta)):
    print(f"SB{{{c.index}}} fuses", ", ".join(str(base.labels[x]) for x in sorted(c.members)))

path = bf_path(spec, 6)
print("bf-path from [s'_6,a_0]:", " ".join(str(base.labels[x]) for x in path.nodes))
print("shared with a_1 at", base.labels[path.shared[1]])

folded = backward_fold(base, FoldSpec.total(spec.beta))
rg = reachability(folded, initial_marking(folded))
print(f"C_bf(3,2,1,4): {rg.n_states} states, safe={check_safety(rg).holds}, live={check_liveness(rg).holds}")

# n - 1 <= p fails for C(2,4,2,4) (n - 1 = 5 > 4 = p) and the fold overflows.
bad = CycloidSpec(2, 4, 2, 4)
folded = backward_fold(attach_regular_labels(synthesize(bad)), FoldSpec.total(bad.beta))
rg = reachability(folded, initial_marking(folded))
report = check_safety(rg)
print(f"C_bf(2,4,2,4): safe={report.holds}, overfull places {[str(p) for p in report.stats['unsafe_places']]}")
seq, marking = find_state(rg, lambda m: m.get(SBCLASS(1), 0) >= 2)
print("two tokens on SB{1} after", " ".join(str(folded.labels[t]) for t in seq))
