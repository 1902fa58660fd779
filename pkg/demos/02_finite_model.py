"""Finding the directed 2-cycle as a finite model.

Every node needs an outgoing edge to another node.  The tableau keeps adding
partial models until the branch ends in a universal without iso children;
the composite of the edge labels along that branch is the model.
"""

from _common import load, show_branch

from condsat import condition as cd
from condsat import tableau as tb

prob, cat = load("finite_model")
res = tb.run(prob.condition, cat)
print("verdict:", res.verdict, "after", res.steps, "steps")
show_branch(res.tableau, res.leaf)
model = cd.compose_all(res.model, cat, prob.root)
print("model graph:", model.cod)
print("oracle agrees:", cd.satisfies(res.model, prob.condition, cat))
