"""Small helpers shared by the demo scripts."""

from pathlib import Path

from condsat import dsl

PROBLEMS = Path(__file__).resolve().parent / "problems"


def load(name: str):
    text = (PROBLEMS / f"{name}.cond").read_text()
    prob = dsl.parse_problem(text)
    return prob, prob.make_category()


def show_branch(tableau, leaf_id: int) -> None:
    for node in tableau.branch(leaf_id):
        arrow = "" if node.incoming is None else dsl.format_arrow(node.incoming)
        cond = dsl.format_condition(node.condition, top=False)
        print(f"  [{node.id}] via {arrow or '(root)'}")
        print(f"      {cond}")
