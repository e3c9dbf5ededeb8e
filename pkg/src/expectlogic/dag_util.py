import logging
from collections.abc import Callable, Mapping, Sequence

import networkx as nx

from expectlogic.errors import ProofFormatError

logger = logging.getLogger(__name__)


def dag_from_premises(premises: Mapping[int, Sequence[int]]) -> nx.DiGraph:
    """Build networkx directed graph from a line -> premise-lines mapping.

    Edges point from a line to the lines it was derived from.
    """
    nodes = premises.keys()
    edges = []
    for line, used in premises.items():
        for premise in used:
            # check for undefined premises
            if premise not in nodes:
                msg = f"Line {line} refers to line {premise} which does not exist."
                raise ProofFormatError(msg)
            edges.append((line, premise))

    dag = nx.DiGraph()
    dag.add_nodes_from(nodes)
    dag.add_edges_from(edges)
    if not nx.is_directed_acyclic_graph(dag):
        msg = "Derivation references form a cycle."
        raise ProofFormatError(msg)
    return dag


def _node_levels(dag, node, level, out):
    out.append((node, level))
    for successor in sorted(dag.successors(node)):
        _node_levels(dag, successor, level + 1, out)
    return out


def dag_to_node_levels(dag: nx.DiGraph, root, baselevel=0) -> list[tuple[int, int]]:
    """Tree representation below root; shared premises are repeated."""
    return _node_levels(dag, root, baselevel, [])


def dag_to_indented_text(
    dag: nx.DiGraph, root, sep: str = "  ", label: Callable | None = None
) -> list[str]:
    """Indented lines of the tree below root."""
    label = str if label is None else label
    return [level * sep + label(node) for node, level in dag_to_node_levels(dag, root)]


def unreachable_nodes(dag: nx.DiGraph, root) -> list:
    """Nodes that root does not depend on."""
    needed = nx.descendants(dag, root) | {root}
    return sorted(set(dag.nodes) - needed)
