/** Simulation configuration and d3-force wiring.
 *
 * The configuration is a plain data structure so tests can assert exact
 * equality; in particular, graph layout at edge force strength 0 produces a
 * configuration identical to the force layout's (the link force disappears
 * entirely rather than idling at strength 0). */

import {
  forceCollide,
  forceLink,
  forceManyBody,
  forceSimulation,
  forceX,
  forceY,
  Simulation,
  SimulationNodeDatum,
} from "d3-force";

import {
  ANCHOR_STRENGTH,
  CHARGE_STRENGTH,
  COLLIDE_PADDING,
  LINK_DISTANCE,
  LINK_SCALE,
} from "./config";
import { ViewState } from "./state";
import { GraphEdge, SliceSummary } from "./types";

export interface AnchorPoint {
  x: number;
  y: number;
}

export interface LinkSpec {
  source: string;
  target: string;
  overlap: number;
  strength: number;
  distance: number;
}

export interface SimulationConfig {
  chargeStrength: number;
  collidePadding: number;
  anchorStrength: number;
  anchors: Record<string, AnchorPoint>;
  links: LinkSpec[];
}

/** Cluster key: slices over the same feature set share an anchor. */
export function anchorKey(slice: SliceSummary): string {
  return slice.predicates
    .map((p) => p.feature)
    .sort()
    .join("+");
}

/** Grid of cluster anchors, one per distinct feature set, laid out row-major
 * inside the viewport with a margin. */
export function buildAnchors(
  slices: SliceSummary[],
  width: number,
  height: number
): Record<string, AnchorPoint> {
  const keys = Array.from(new Set(slices.map(anchorKey))).sort();
  const anchors: Record<string, AnchorPoint> = {};
  if (keys.length === 0) return anchors;
  const columns = Math.ceil(Math.sqrt(keys.length));
  const rows = Math.ceil(keys.length / columns);
  keys.forEach((key, i) => {
    const col = i % columns;
    const row = Math.floor(i / columns);
    anchors[key] = {
      x: ((col + 0.5) / columns) * width,
      y: ((row + 0.5) / rows) * height,
    };
  });
  return anchors;
}

/** Links carry strength edge_force_strength x (overlap / max overlap); edges
 * below the client-side Edge Filtering threshold are dropped here. */
function buildLinks(edges: GraphEdge[], state: ViewState): LinkSpec[] {
  const visible = edges.filter((e) => e.overlap >= state.edgeMinOverlap);
  if (visible.length === 0) return [];
  const maxOverlap = Math.max(...visible.map((e) => e.overlap));
  return visible.map((e) => ({
    source: e.a,
    target: e.b,
    overlap: e.overlap,
    strength: state.edgeForceStrength * (e.overlap / maxOverlap) * LINK_SCALE,
    distance: LINK_DISTANCE,
  }));
}

export function buildSimulationConfig(
  slices: SliceSummary[],
  edges: GraphEdge[],
  state: ViewState,
  width: number,
  height: number
): SimulationConfig {
  const linked =
    state.layout === "graph" && state.edgeForceStrength > 0
      ? buildLinks(edges, state)
      : [];
  return {
    chargeStrength: CHARGE_STRENGTH,
    collidePadding: COLLIDE_PADDING,
    anchorStrength: ANCHOR_STRENGTH,
    anchors: buildAnchors(slices, width, height),
    links: linked,
  };
}

export interface SimNode extends SimulationNodeDatum {
  id: string;
  radius: number;
  anchor: AnchorPoint;
}

/** Wire the config into a d3-force simulation over the given nodes. */
export function createSimulation(
  config: SimulationConfig,
  nodes: SimNode[]
): Simulation<SimNode, undefined> {
  const sim = forceSimulation(nodes)
    .force("charge", forceManyBody().strength(config.chargeStrength))
    .force(
      "collide",
      forceCollide<SimNode>().radius((n) => n.radius + config.collidePadding)
    )
    .force(
      "anchor-x",
      forceX<SimNode>((n) => n.anchor.x).strength(config.anchorStrength)
    )
    .force(
      "anchor-y",
      forceY<SimNode>((n) => n.anchor.y).strength(config.anchorStrength)
    );
  if (config.links.length > 0) {
    sim.force(
      "link",
      forceLink<SimNode, LinkSpec & { index?: number }>(
        config.links.map((l) => ({ ...l }))
      )
        .id((n) => n.id)
        .strength((l) => l.strength)
        .distance((l) => l.distance)
    );
  }
  return sim;
}
