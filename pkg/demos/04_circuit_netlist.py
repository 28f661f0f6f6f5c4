"""
From graph to optical circuit
=============================

Each vertex of degree kappa becomes a ring of kappa half-wave plates and
kappa polarizing beam splitters. We compile the four-vertex example graph,
check the node counts, and write the netlist as DOT and JSON.
"""

import sys

from circwalk import blow_up, compile_circuit, emit_netlist, load_preset

G, L, _ = load_preset("fig3")
B = blow_up(G, L)

print("degrees (tail included):", B.degrees)
for a in B.retained_arcs[:4]:
    print("retained", a.origin, "->", a.terminus)

C = compile_circuit(B, L)
print(f"{len(C.hwp_nodes)} HWP, {len(C.pbs_nodes)} PBS, {len(C.arcs)} arcs")

out = sys.argv[1] if len(sys.argv) > 1 else None
for fmt in ("dot", "json"):
    text = emit_netlist(C, fmt)
    if out:
        with open(f"{out}.{fmt}", "w") as fh:
            fh.write(text)
    else:
        print(text[:300] + "...\n")
