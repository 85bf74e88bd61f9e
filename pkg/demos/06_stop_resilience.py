"""Stopping processes of stop-resilient cycloids."""

from cycloids import (
    TSTOP,
    CycloidSpec,
    FoldSpec,
    add_stop_transitions,
    attach_regular_labels,
    backward_fold,
    delete_process,
    enabled_set,
    fire,
    initial_marking,
    isomorphic,
    make_stop_resilient,
    stop_and_cascade,
    stop_scenario,
    synthesize,
    tr,
)

# Stop one of three cars; what is left is the two-car system with one more gap.
for g, c, s in [(2, 3, 1), (2, 3, 2), (3, 4, 3)]:
    rep = stop_scenario(g, c, s)
    print(f"scenario ({g},{c},{s}): holds={rep.holds}")
    for r in rep.stats["rounds"]:
        print(f"    {r['from']} stop a_{r['stopped']} -> {r['target']} ({r['states']} states)")

# The same elimination on a partial folding.
base = attach_regular_labels(synthesize(CycloidSpec(2, 3, 4, 6)))
net = add_stop_transitions(backward_fold(base, FoldSpec({0, 2})), [2], force=True)
m, _ = stop_and_cascade(net, initial_marking(net), 2)
reduced = delete_process(net, 2)
m = {p: n for p, n in m.items() if p in reduced.places}
target = attach_regular_labels(synthesize(CycloidSpec(3, 2, 5, 2)))
same = isomorphic(reduced, target, (m, initial_marking(target, "regular", 1))).holds
print("C(2,3,4,6) minus a_2 matches C(3,2,5,2):", same)

# Stop transitions only work on the C(g,c,c,c) family.
for net in (make_stop_resilient(3, 2, force=True, gamma=4, delta=4, processes=[0]), make_stop_resilient(3, 2, processes=[0])):
    m = fire(net, initial_marking(net), TSTOP(0))
    for i in range(1, 5):
        m = fire(net, m, net.locate(tr(i, 1)))
    nxt = tr(5, 1) if net.spec.gamma == 4 else tr(0, 1)
    print(f"{net.spec}: after stop and [t_1..t_4,a_1], {nxt} enabled = {net.locate(nxt) in enabled_set(net, m)}")
