import asyncio
import json
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Annotated, Any, Iterator

from dotenv import load_dotenv
from fastmcp import FastMCP
from mcp import ErrorData, McpError
from mcp.types import INTERNAL_ERROR, INVALID_PARAMS
from pydantic import BaseModel, Field

sys.path.append(str(Path(__file__).resolve().parent.parent))
from config import load_config  # noqa: E402
from csscodes import biclique_css_form, css_claim_check  # noqa: E402
from entanglement import pauli_persistency, schmidt_measure_bounds  # noqa: E402
from graphcore import Graph, family, local_complement  # noqa: E402
from lcequiv import lc_equivalent, lc_orbit, lulc_certificate  # noqa: E402
from reduction import reduce_to_graph, verify_rank_relations  # noqa: E402
from stabilizer import (  # noqa: E402
    check_msc,
    distance,
    graph_check_matrix,
    parse_check_matrix,
    schmidt_rank,
)

# --- Load environment variables ---
load_dotenv()
CONFIG = load_config()

mcp = FastMCP("Graph State MCP Server")


class RichToolDescription(BaseModel):
    description: str
    use_when: str
    side_effects: str | None = None


GraphArg = Annotated[
    str, Field(description='Graph JSON, e.g. {"n": 3, "edges": [[0, 1], [0, 2]]}')
]


@contextmanager
def _tool_errors() -> Iterator[None]:
    try:
        yield
    except ValueError as exc:
        raise McpError(ErrorData(code=INVALID_PARAMS, message=str(exc)))
    except RuntimeError as exc:
        raise McpError(ErrorData(code=INTERNAL_ERROR, message=str(exc)))


def _graph_dict(g: Graph) -> dict[str, Any]:
    return json.loads(g.to_json())


# --- Tools: graphs ---


@mcp.tool(description="Generate a named graph family member as graph JSON")
async def generate_family(
    kind: Annotated[str, Field(description="Family name such as star, complete, biclique, crazy", example="biclique")],
    params: Annotated[list[int], Field(description="Family parameters", example=[3, 3])],
) -> dict:
    with _tool_errors():
        return _graph_dict(family(kind, *params))


@mcp.tool(description="Locally complement a graph at one vertex")
async def local_complement_graph(
    graph: GraphArg,
    vertex: Annotated[int, Field(ge=0, description="Vertex to complement at")],
) -> dict:
    with _tool_errors():
        return _graph_dict(local_complement(Graph.from_json(graph), vertex))


LcEquivalenceDescription = RichToolDescription(
    description="Decide whether two graph states are LC-equivalent and return the shortest witness.",
    use_when="Use to check if two graphs are related by local complementations.",
    side_effects=None,
)


@mcp.tool(description=LcEquivalenceDescription.model_dump_json())
async def lc_equivalence(
    first: GraphArg,
    second: GraphArg,
    up_to_iso: Annotated[bool, Field(description="Match the second graph up to relabeling")] = False,
) -> dict:
    with _tool_errors():
        witness = lc_equivalent(
            Graph.from_json(first),
            Graph.from_json(second),
            up_to_iso=up_to_iso,
            limit=CONFIG.orbit_limit,
            budget=CONFIG.orbit_budget,
        )
    if witness is None:
        return {"equivalent": False}
    return {
        "equivalent": True,
        "steps": list(witness.steps),
        "permutation": None if witness.permutation is None else list(witness.permutation),
    }


@mcp.tool(description="Size of the LC orbit of a graph")
async def lc_orbit_size(
    graph: GraphArg,
    up_to_perm: Annotated[bool, Field(description="Count isomorphism classes instead of labeled graphs")] = True,
) -> int:
    with _tool_errors():
        return len(lc_orbit(Graph.from_json(graph), up_to_perm, limit=CONFIG.orbit_limit, budget=CONFIG.orbit_budget))


# --- Tools: stabilizers ---


@mcp.tool(description="Check the minimal support condition of a connected graph state")
async def msc(graph: GraphArg) -> bool:
    with _tool_errors():
        return check_msc(graph_check_matrix(Graph.from_json(graph)), CONFIG.enumeration_limit)


@mcp.tool(description="Weight of the lowest-weight non-identity stabilizer element")
async def stabilizer_distance(graph: GraphArg) -> int:
    with _tool_errors():
        return distance(graph_check_matrix(Graph.from_json(graph)), CONFIG.enumeration_limit)


@mcp.tool(description="Schmidt rank of a graph state across a cut")
async def schmidt_rank_of(
    graph: GraphArg,
    part: Annotated[list[int], Field(description="Vertices on one side of the cut", example=[0, 1])],
) -> int:
    with _tool_errors():
        return schmidt_rank(Graph.from_json(graph), part, CONFIG.enumeration_limit)


@mcp.tool(description="Reduce stabilizer generators (one per line, e.g. +XXX) to an LC-equivalent graph")
async def reduce_stabilizer(
    generators: Annotated[str, Field(description="Generators, one per line", example="+XXX\n+ZZI\n+IZZ")],
) -> dict:
    with _tool_errors():
        graph, trace = reduce_to_graph(parse_check_matrix(generators))
    return {
        "graph": _graph_dict(graph),
        "r": trace.r,
        "local_cliffords": [[q, g.value] for q, g in trace.local_cliffords],
    }


@mcp.tool(description="Rank and minus-sign relations for a bipartite graph across one side")
async def rank_relations(
    graph: GraphArg,
    part: Annotated[list[int] | None, Field(description="One side of the bipartition")] = None,
) -> dict:
    with _tool_errors():
        report = verify_rank_relations(Graph.from_json(graph), part, CONFIG)
    data = {name: getattr(report, name) for name in report.__dataclass_fields__}
    data["all_hold"] = report.all_hold
    return data


# --- Tools: entanglement and codes ---


@mcp.tool(description="Pauli persistency and Schmidt-measure bounds of a graph state")
async def pauli_persistency_of(graph: GraphArg) -> dict:
    with _tool_errors():
        g = Graph.from_json(graph)
        bounds = schmidt_measure_bounds(g, CONFIG) if g.n <= CONFIG.schmidt_limit else None
        pp = bounds.upper if bounds else pauli_persistency(g, CONFIG.pp_limit)
    return {
        "pauli_persistency": pp,
        "schmidt_lower": bounds.lower if bounds else None,
        "tight": bounds.tight if bounds else None,
    }


@mcp.tool(description="Biclique state as a CSS code with its distance and dual distance")
async def css_biclique(
    m: Annotated[int, Field(gt=0, description="Left block size")],
    n: Annotated[int, Field(gt=0, description="Right block size")],
) -> dict:
    with _tool_errors():
        form = biclique_css_form(m, n)
        claim = css_claim_check(m, n, CONFIG.kernel_limit)
    return {
        "generators": [str(p) for p in form.rows],
        "distance": claim.distance,
        "dual_distance": claim.dual_distance,
        "holds": claim.holds,
    }


CertifyDescription = RichToolDescription(
    description="Try the known sufficient conditions for LU <=> LC on a graph state.",
    use_when="Use to learn whether LU-equivalence reduces to LC-equivalence for a graph.",
    side_effects=None,
)


@mcp.tool(description=CertifyDescription.model_dump_json())
async def certify(graph: GraphArg) -> dict:
    with _tool_errors():
        cert = lulc_certificate(Graph.from_json(graph), CONFIG)
    return {
        "verdict": str(cert),
        "result": cert.result,
        "witness": None if cert.witness is None else list(cert.witness.steps),
        "skipped": {str(k): v for k, v in cert.skipped.items()},
    }


async def main() -> None:
    # stdout carries the protocol
    print("\U0001F9EE Starting Graph State MCP server on stdio", file=sys.stderr)
    await mcp.run_async("stdio")


if __name__ == "__main__":
    asyncio.run(main())
