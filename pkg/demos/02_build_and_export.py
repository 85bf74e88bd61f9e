"""Synthesize a cycloid net, pick an initial marking and export it.

Usage: python 02_build_and_export.py [OUTPUT_DIR]
"""

import sys
import tempfile
from pathlib import Path

from cycloids import CycloidSpec, attach_regular_labels, export, import_json, initial_marking, synthesize

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="cycloid-"))
out.mkdir(parents=True, exist_ok=True)

net = attach_regular_labels(synthesize(CycloidSpec(4, 3, 3, 3)))
print(f"|T|={len(net.transitions)} |S|={len(net.places)} |F|={len(net.arcs)}")

regular = initial_marking(net)
standard = initial_marking(net, "standard")
print("regular marking: ", ", ".join(str(net.labels[s]) for s in sorted(regular)))
print("standard marking:", ", ".join(str(net.labels[s]) for s in sorted(standard)))

for fmt in ("dot", "pnml", "json"):
    path = out / f"C4333.{fmt}"
    path.write_bytes(export(net, regular, fmt))
    print("wrote", path)

# JSON is the one format that reads back.
again, marking = import_json((out / "C4333.json").read_bytes())
print("round trip equal:", again == net and marking == regular)
