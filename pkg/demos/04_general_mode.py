"""General mode over all graphs: sections instead of isos.

With non-injective matches a node with a loop satisfies "the distinguished
node has an edge to every node".  Forbidding the loop makes the condition
unsatisfiable, and only the section rule can see it: restricted mode is
refused for this category.
"""

from _common import load, show_branch

from condsat import tableau as tb
from condsat.errors import ConfigError

prob, cat = load("loop")
try:
    tb.Tableau(prob.condition, cat, tb.Config(mode=tb.RESTRICTED))
except ConfigError as exc:
    print("restricted mode:", exc)

res = tb.run(prob.condition, cat, tb.Config(mode=tb.GENERAL))
print("verdict:", res.verdict, "after", res.steps, "steps")
for leaf in res.tableau.leaves():
    show_branch(res.tableau, leaf.id)
