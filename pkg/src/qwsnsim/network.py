"""Topologies, per-link metrics, and network aggregation.

Links are directed; bidirectional traffic is two links. Latency here is
transmission time L/C only (no queueing or propagation terms), and every
TRS variant of a metric is the base value scaled by the link's gain:
capacity goes up by gamma, time/energy/latency come down by gamma.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .channel import FadingDraw, FadingSpec, LinkBudget, TrsGain, apply_trs, faded_capacity
from .errors import (
    EmptyNetworkError,
    EmptyPathError,
    EmptyUserSetError,
    LinkOutageError,
    ZeroCapacityError,
)


@dataclass(frozen=True)
class Node:
    id: str
    tx_power_w: float
    packet_length_bits: float

    def __post_init__(self):
        if self.tx_power_w < 0:
            raise ValueError(f"tx_power_w must be >= 0, got {self.tx_power_w}")
        if not self.packet_length_bits > 0:
            raise ValueError(
                f"packet_length_bits must be > 0, got {self.packet_length_bits}"
            )


@dataclass(frozen=True)
class Link:
    src: str
    dst: str
    budget: LinkBudget
    fading: FadingSpec
    gain: TrsGain

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError(f"link endpoints must differ, got {self.src!r} -> {self.dst!r}")

    @property
    def id(self) -> str:
        return f"{self.src}->{self.dst}"


class TopologyKind(Enum):
    CHAIN = "chain"
    STAR = "star"
    MESH = "mesh"


@dataclass(frozen=True)
class Topology:
    """Node/link graph. The star hub is the first node by convention.

    Chain: links must form one directed path visiting each node once.
    Star: every link touches the hub. Mesh: any links, no duplicated
    (src, dst) pair. Duplicate pairs are rejected for every kind.
    """

    kind: TopologyKind
    nodes: tuple[Node, ...]
    links: tuple[Link, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "links", tuple(self.links))
        if not self.nodes:
            raise ValueError("topology requires at least one node")
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate node ids")
        known = set(ids)
        seen_pairs = set()
        for link in self.links:
            for endpoint in (link.src, link.dst):
                if endpoint not in known:
                    raise ValueError(f"link references unknown node {endpoint!r}")
            pair = (link.src, link.dst)
            if pair in seen_pairs:
                raise ValueError(f"duplicate link {link.id}")
            seen_pairs.add(pair)
        if self.kind is TopologyKind.CHAIN:
            self._validate_chain()
        elif self.kind is TopologyKind.STAR:
            hub = self.nodes[0].id
            for link in self.links:
                if hub not in (link.src, link.dst):
                    raise ValueError(f"star link {link.id} does not touch hub {hub!r}")

    def _validate_chain(self):
        if len(self.links) != len(self.nodes) - 1:
            raise ValueError(
                f"chain of {len(self.nodes)} nodes needs {len(self.nodes) - 1} links, "
                f"got {len(self.links)}"
            )
        if not self.links:
            return
        succ: dict[str, str] = {}
        in_deg: dict[str, int] = {}
        for link in self.links:
            if link.src in succ:
                raise ValueError(f"node {link.src!r} has two outgoing chain links")
            succ[link.src] = link.dst
            in_deg[link.dst] = in_deg.get(link.dst, 0) + 1
            if in_deg[link.dst] > 1:
                raise ValueError(f"node {link.dst!r} has two incoming chain links")
        starts = [n.id for n in self.nodes if n.id not in in_deg]
        if len(starts) != 1:
            raise ValueError("chain links do not form a single path")
        cursor, visited = starts[0], 1
        while cursor in succ:
            cursor = succ[cursor]
            visited += 1
        if visited != len(self.nodes):
            raise ValueError("chain path does not visit every node")

    def node(self, node_id: str) -> Node:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)


@dataclass(frozen=True)
class LinkMetrics:
    """Per-link derived metrics, with and without TRS."""

    capacity_bps: float
    capacity_trs_bps: float
    tx_time_s: float
    tx_time_trs_s: float
    energy_j: float
    energy_trs_j: float
    latency_s: float
    latency_trs_s: float


@dataclass(frozen=True)
class NetworkReport:
    """Network-wide totals of the TRS metrics plus the per-link breakdown."""

    total_throughput_bps: float
    total_energy_j: float
    total_latency_s: float
    per_link: tuple[tuple[str, LinkMetrics], ...]
    bottleneck_capacity_bps: float | None = None


def transmission_time(packet_length_bits: float, capacity_bps: float) -> float:
    """Time to push one packet through the link: L / C."""
    if not packet_length_bits > 0:
        raise ValueError(f"packet_length_bits must be > 0, got {packet_length_bits}")
    if capacity_bps < 0:
        raise ValueError(f"capacity must be >= 0, got {capacity_bps}")
    if capacity_bps == 0:
        raise ZeroCapacityError("zero-capacity link cannot carry traffic (outage)")
    return packet_length_bits / capacity_bps


def node_energy(tx_power_w: float, tx_time_s: float) -> float:
    """Energy spent transmitting: P * T."""
    if tx_power_w < 0 or tx_time_s < 0:
        raise ValueError("power and time must both be >= 0")
    return tx_power_w * tx_time_s


def link_metrics(node: Node, link: Link, draw: FadingDraw) -> LinkMetrics:
    """Evaluate one link under one fading draw.

    ``node`` is the transmitting (source) node; its power and packet length
    drive the energy and time figures. The TRS fields are the base fields
    scaled by the link gain, division/multiplication applied directly so the
    gamma laws hold to machine precision.
    """
    if node.id != link.src:
        raise ValueError(f"node {node.id!r} is not the source of link {link.id}")
    capacity = faded_capacity(link.budget, draw)
    if capacity == 0.0:
        raise LinkOutageError(f"fading draw produced zero capacity on {link.id}")
    gamma = link.gain.gamma
    tx_time = transmission_time(node.packet_length_bits, capacity)
    energy = node_energy(node.tx_power_w, tx_time)
    latency = tx_time
    return LinkMetrics(
        capacity_bps=capacity,
        capacity_trs_bps=apply_trs(capacity, link.gain),
        tx_time_s=tx_time,
        tx_time_trs_s=tx_time / gamma,
        energy_j=energy,
        energy_trs_j=energy / gamma,
        latency_s=latency,
        latency_trs_s=latency / gamma,
    )


def path_capacity(hop_capacities: Sequence[float]) -> float:
    """End-to-end capacity of a multi-hop route: the weakest hop."""
    if len(hop_capacities) == 0:
        raise EmptyPathError("path has no hops")
    if any(c < 0 for c in hop_capacities):
        raise ValueError("hop capacities must be >= 0")
    return min(hop_capacities)


def path_latency(hop_latencies: Sequence[float]) -> float:
    """Per-hop latencies accumulate along the route."""
    if len(hop_latencies) == 0:
        raise EmptyPathError("path has no hops")
    return sum(hop_latencies)


def network_totals(
    per_link: Sequence[LinkMetrics],
    link_ids: Sequence[str] | None = None,
    bottleneck_capacity_bps: float | None = None,
) -> NetworkReport:
    """Aggregate TRS metrics: throughput, energy, and latency sums.

    Summation is a left fold in link order, so repeated aggregation of the
    same report is bit-reproducible.
    """
    if len(per_link) == 0:
        raise EmptyNetworkError("network has no links")
    if link_ids is None:
        link_ids = [f"link{i}" for i in range(len(per_link))]
    if len(link_ids) != len(per_link):
        raise ValueError("link_ids and per_link lengths differ")
    return NetworkReport(
        total_throughput_bps=sum(m.capacity_trs_bps for m in per_link),
        total_energy_j=sum(m.energy_trs_j for m in per_link),
        total_latency_s=sum(m.latency_trs_s for m in per_link),
        per_link=tuple(zip(link_ids, per_link)),
        bottleneck_capacity_bps=bottleneck_capacity_bps,
    )


def hybrid_total_capacity(classical_bps: float, quantum_bps: float, gain: TrsGain) -> float:
    """Hybrid classical+quantum capacity: gamma * (C_classical + C_quantum)."""
    if classical_bps < 0 or quantum_bps < 0:
        raise ValueError("capacities must be >= 0")
    return gain.gamma * (classical_bps + quantum_bps)


def multiuser_total_capacity(user_capacities: Sequence[float], gain: TrsGain) -> float:
    """Multi-user total: gamma * sum of per-user capacities."""
    if len(user_capacities) == 0:
        raise EmptyUserSetError("multi-user total requires at least one user")
    if any(c < 0 for c in user_capacities):
        raise ValueError("capacities must be >= 0")
    return gain.gamma * sum(user_capacities)
