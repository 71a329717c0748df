"""Petri nets to higher-dimensional automata, partial HDAs and ST-graphs."""

from importlib.resources import files

from .budget import Budget, BudgetExceeded
from .conclist import canon_insert, canonical, parikh, remove
from .cubical import Cell, Complex, Step, down, essential, face, flatten, is_path, skeleton, truncate, up, validate
from .ingest import ParseDiagnostic, ParseError, dump_gnet, load_net, parse_gnet, parse_pnml, parse_poly
from .multiset import Marking, Multiset, TransitionMultiset
from .net import (
    LabeledGraph,
    Net,
    cs_reachability_graph,
    embed_to_gnet,
    enabled,
    fire,
    fire_step,
    reachability_graph,
    step_enabled,
    transition_effect,
)
from .poly import FlowPolynomial, eval_poly
from .semantics import (
    CheckResult,
    STGraph,
    STState,
    build,
    build_hda,
    build_phda,
    build_st,
    cell_admissible,
    check_flatten,
    check_truncation,
    st_truncate1,
)


def corpus_path(name: str = ""):
    """Path to a bundled example net (or the corpus directory)."""
    return files(__name__).joinpath("corpus", name) if name else files(__name__).joinpath("corpus")
