"""Refuting "there is a node, and no node may exist".

The root universal has an iso child (the identity), so the restricted rule
pulls it forward.  The existential then adds a node, and the second
universal, shifted along that step, now has an iso child whose body is
false.  Pulling that forward closes the only branch.
"""

from _common import load, show_branch

from condsat import tableau as tb

prob, cat = load("unsat")
res = tb.run(prob.condition, cat)
print("verdict:", res.verdict, "after", res.steps, "steps")
(leaf,) = res.tableau.leaves()
show_branch(res.tableau, leaf.id)
