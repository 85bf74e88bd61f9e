"""Parameters, normalization and regular coordinates of C(4,3,3,3)."""

from cycloids import CycloidSpec, fundamental_points, metrics, normalize, regular_label, stand, tr

spec = CycloidSpec(4, 3, 3, 3)
m = metrics(spec)
print(f"{spec}: A={m.area} p={spec.process_length} n={m.n}")
print(f"{m.fwd_cycle_count} forward cycles of length {m.fwd_cycle_len}, {m.bwd_cycle_count} backward of length {m.bwd_cycle_len}")
print(f"shortest transition cycle: {m.min_cycle} ({m.min_cycle_source})")

# Every grid point has one representative inside the fundamental parallelogram.
w = normalize(spec, (-2, -2))
print(f"(-2,-2) = {w.representative} shifted by m={w.m}, n={w.n_steps} lattice steps")
print(f"{len(fundamental_points(spec))} fundamental points, one per transition")

# Regular coordinates name transition t_i of process a_j.
for j in range(spec.beta):
    row = [str(stand(spec, tr(i, j))) for i in range(spec.process_length)]
    print(f"a_{j}: " + " ".join(row))
print("t(1,1) is", regular_label(spec, (1, 1)))

# A non-regular cycloid has no process structure, but the search still finds its shortest cycle.
other = CycloidSpec(4, 3, 3, 6)
print(f"{other}: p={other.process_length}, shortest cycle {metrics(other).min_cycle}")
