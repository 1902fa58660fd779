"""An infinite model: the ray.

No finite graph satisfies the ray condition, so the tableau never reaches an
unextendable leaf.  Over cospans a universal node can be compared with an
earlier one after forgetting part of its root; when they match up to iso the
repeating segment describes an infinite model.
"""

from _common import load

from condsat import cospan as cs
from condsat import dsl
from condsat import tableau as tb
from condsat import witness as wt

prob, cat = load("ray")
res = tb.run(prob.condition, cat, tb.Config(witness=True))
w = res.candidate
print("verdict:", res.verdict, "after", res.steps, "steps")
print(f"node {w.end} repeats node {w.start}")
print("  m    =", dsl.format_arrow(w.m))
print("  iota =", dsl.format_arrow(w.iota))
print("  verified:", wt.verify_witness(res.tableau, w))

for k in (1, 2, 3):
    seq = wt.unroll_witness(w, k)
    print(f"  {k} period(s):", cs.center_of_composite(seq))
