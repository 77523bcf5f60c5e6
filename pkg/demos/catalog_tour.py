#!/usr/bin/env python3
"""Walk the function catalog and print node statistics for each shape."""

import numpy as np

from infconv.grid import FunctionSpec, GridDomain, integrate, sample

dom = GridDomain(1, 4.0, 257)
print(f"grid: [-{dom.half_width:g}, {dom.half_width:g}], n={dom.n}, h={dom.h:g}")
print(f"{'kind':20s} {'min':>10s} {'max':>10s} {'integral':>10s}  tags")

specs = [
    FunctionSpec.constant(1.0),
    FunctionSpec.triangle(),
    FunctionSpec.quadratic(1.0),
    FunctionSpec.quadratic(0.5, shift=(0.7,), offset=0.3),
    FunctionSpec.power(1.0, 1.5),
    FunctionSpec.indicator(1.5),
    FunctionSpec.spike(2.5),
    FunctionSpec.logplus(),
    FunctionSpec.cantor(4),
]
for spec in specs:
    f = sample(spec, dom)
    tags = []
    if f.quad_coeff is not None:
        tags.append(f"quad_coeff={f.quad_coeff:g}")
    if f.indicator_radius is not None:
        tags.append(f"indicator_radius={f.indicator_radius:g}")
    if f.radial_nonincreasing:
        tags.append("radial_nonincreasing")
    label = spec.kind + ("(shifted)" if spec.shift else "")
    mx = f.node_max
    print(f"{label:20s} {f.node_min:10.4f} "
          f"{mx if np.isfinite(mx) else float('inf'):10.4f} "
          f"{integrate(f):10.4f}  {', '.join(tags) or '-'}")

# round-trip: every spec serializes to JSON and back unchanged
for spec in specs:
    assert FunctionSpec.from_json(spec.to_json()) == spec
print("\nall specs JSON round-trip exactly")
