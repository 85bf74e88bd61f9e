"""Lockstep comparison of a cycloid with its folding."""

from cycloids import (
    CycloidSpec,
    FoldSpec,
    attach_regular_labels,
    backward_fold,
    check_fold_bisimulation,
    initial_marking,
    synthesize,
)


def compare(params, D=None):
    spec = CycloidSpec(*params)
    base = attach_regular_labels(synthesize(spec))
    fold = backward_fold(base, FoldSpec.total(spec.beta) if D is None else FoldSpec(D))
    rep = check_fold_bisimulation(base, initial_marking(base), fold)
    line = f"{spec} D={fold.fold}: n-1={spec.n - 1} p={spec.process_length} lockstep={rep.holds}"
    if not rep.holds:
        w = rep.witness
        seq = " ".join(str(base.labels[t]) for t in w["sequence"]) or "(start)"
        extra = " ".join(str(base.labels[t]) for t in w["enabled_only_in_folded"])
        line += f"\n    after {seq} the fold also enables {extra}"
    print(line)


compare((3, 2, 1, 4))
compare((2, 3, 4, 6), {0, 2})
compare((2, 4, 2, 4))  # unsafe fold, diverges immediately
compare((1, 2, 1, 2))  # n - 1 == p: safe and live, yet not in lockstep
