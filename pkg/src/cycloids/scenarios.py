"""Stopping processes of stop-resilient cycloids and checking what remains."""

from __future__ import annotations

from typing import Sequence

from .algebra import CycloidSpec
from .errors import CycloidError
from .isomorphism import isomorphic
from .nets import (
    FoldSpec,
    Net,
    TSTOP,
    attach_regular_labels,
    backward_fold,
    delete_process,
    initial_marking,
    make_stop_resilient,
    synthesize,
    tr,
)
from .semantics import (
    DEFAULT_MAX_STATES,
    PropertyReport,
    check_liveness,
    check_safety,
    fire,
    reachability,
    without_stop_transitions,
)

__all__ = ["stop_and_cascade", "stop_processes", "stop_scenario", "reference_after_stop"]


def stop_and_cascade(net: Net, marking: dict, k: int) -> tuple[dict, list]:
    """Fire ``[t_stop, a_k]`` and then ``[t_j, a_j]`` for ``j = k-1, ..., 0``.

    On a stop-resilient cycloid at its regular marking the result is the image
    of the 1-regular marking of the cycloid with one process fewer.
    """
    sequence = [TSTOP(k)] + [net.locate(tr(j, j)) for j in range(k - 1, -1, -1)]
    for t in sequence:
        marking = fire(net, marking, t)
    return marking, sequence


def stop_processes(net: Net, marking: dict, stopped) -> tuple[Net, dict]:
    """Fire the stop transitions of ``stopped`` and drop every stop transition.

    Nothing else is deleted: the stopped processes stay in the net with their
    control tokens gone.
    """
    for k in sorted(set(stopped)):
        marking = fire(net, marking, TSTOP(k))
    return without_stop_transitions(net), marking


def reference_after_stop(g: int, c: int) -> tuple[Net, dict, bool]:
    """The net expected after removing one process of ``C^stop_bf(g, c)``.

    Returns ``(net, 1-regular marking, degenerate)``.  For ``c - 1 == 1`` no
    folding exists, so the plain cycloid ``C(g+1,1,1,1)`` stands in.
    """
    spec = CycloidSpec(g + 1, c - 1, c - 1, c - 1)
    net = attach_regular_labels(synthesize(spec))
    degenerate = spec.beta == 1
    if not degenerate:
        net = backward_fold(net, FoldSpec.total(spec.beta))
    return net, initial_marking(net, "regular", 1), degenerate


def stop_scenario(
    g: int,
    c: int,
    s: int,
    processes: Sequence[int] | None = None,
    max_states: int = DEFAULT_MAX_STATES,
) -> PropertyReport:
    """Stop ``s`` processes of ``C^stop_bf(g, c)`` one after another.

    Each round starts from the stop-resilient cycloid at its regular marking,
    stops one process (``processes[r]``, default the last one), runs the
    cascade to the follower marking, deletes the stopped process together with
    all stop transitions and compares the result, markings included, with the
    folding of ``C(g+1, c-1, c-1, c-1)`` at its 1-regular marking.  The
    remaining net must also be safe and live.
    """
    if c <= 1:
        raise CycloidError("stop scenarios need c > 1")
    if not 0 < s < c:
        raise CycloidError(f"need 0 < s < c, got s={s}, c={c}")
    if processes is not None and len(processes) != s:
        raise CycloidError(f"expected {s} process indices, got {len(processes)}")
    rounds = []
    holds = True
    witness = None
    gi, ci = g, c
    for r in range(s):
        k = ci - 1 if processes is None else processes[r]
        if not 0 <= k < ci:
            raise CycloidError(f"round {r}: process index {k} outside [0, {ci})")
        net = make_stop_resilient(gi, ci)
        marking, sequence = stop_and_cascade(net, initial_marking(net), k)
        reduced = delete_process(net, k)
        reduced_marking = {p: n for p, n in marking.items() if p in reduced.places}
        ref, ref_marking, degenerate = reference_after_stop(gi, ci)
        iso = isomorphic(reduced, ref, (reduced_marking, ref_marking))
        rg = reachability(reduced, reduced_marking, max_states=max_states)
        safe = check_safety(rg)
        live = check_liveness(rg)
        ok = iso.holds and safe.holds and live.holds
        rounds.append(
            {
                "round": r,
                "from": f"C^stop_bf({gi},{ci})",
                "stopped": k,
                "sequence": sequence,
                "target": f"C{'' if degenerate else '_bf'}({gi + 1},{ci - 1},{ci - 1},{ci - 1})",
                "degenerate": degenerate,
                "isomorphic": iso.holds,
                "safe": safe.holds,
                "live": live.holds,
                "states": rg.n_states,
                "complete": rg.complete,
            }
        )
        if not ok:
            holds = False
            witness = {
                "round": r,
                "sequence": sequence,
                "isomorphism": iso.witness if not iso.holds else None,
                "safety": safe.witness,
                "liveness": live.witness,
            }
            break
        gi, ci = gi + 1, ci - 1
    if holds:
        witness = {"mapping": iso.witness["mapping"]}
    inconclusive = any(not x["complete"] for x in rounds)
    return PropertyReport("isomorphic", holds and not inconclusive, witness, {"rounds": rounds}, inconclusive)
