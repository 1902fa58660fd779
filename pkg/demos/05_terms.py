"""Conditions over terms.

Arrows are tuples of terms and composition is substitution.  Representative
squares are weak pushouts, whose mediating arrows come from anti-unification.
"""

from _common import load, show_branch

from condsat import lawvere as lw
from condsat import tableau as tb

a = lw.App("a")
ga = lw.App("g", (a,))
fbar, gbar = lw.weak_pushout(lw.TermTuple(0, (a,)), lw.TermTuple(0, (ga,)))
print("weak pushout of <a> and <g(a)>:")
print("  ", fbar)
print("  ", gbar)
print("anti-unifier of x1 and a:", lw.anti_unifier(lw.Var(1), a, fbar, gbar))

prob, cat = load("terms")
res = tb.run(prob.condition, cat, tb.Config(mode=tb.GENERAL))
print("verdict:", res.verdict, "after", res.steps, "steps")
for leaf in res.tableau.leaves():
    show_branch(res.tableau, leaf.id)
