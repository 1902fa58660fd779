"""Satisfiability checking for nested conditions over several categories:
injective graph morphisms, all graph morphisms, left-linear cospans of
injective graph morphisms and Lawvere theories of term tuples."""

from .category import (AllGraphs, Category, CospanILC, InjGraphs, Lawvere, make_category,
                       representative_squares, sections_with_inverses)
from .condition import Condition, exists, false, forall, shift, satisfies, true
from .dsl import ProblemFile, format_condition, format_problem, parse_graph, parse_problem
from .errors import CondsatError, ParseError, TypeCheckError
from .graphs import Graph, GraphMorphism
from .tableau import Config, Model, Tableau, Unknown, Unsat, Witness, run

__all__ = [
    "AllGraphs", "Category", "CospanILC", "InjGraphs", "Lawvere", "make_category",
    "representative_squares", "sections_with_inverses",
    "Condition", "exists", "false", "forall", "shift", "satisfies", "true",
    "ProblemFile", "format_condition", "format_problem", "parse_graph", "parse_problem",
    "CondsatError", "ParseError", "TypeCheckError",
    "Graph", "GraphMorphism",
    "Config", "Model", "Tableau", "Unknown", "Unsat", "Witness", "run",
]
