/** Tuned rendering and simulation constants. The radius log-scaling bounds
 * are part of the UI contract; the force parameters are hand-tuned. */

export const R_MIN = 4; // px, smallest node
export const R_MAX = 24; // px, largest node

export const EDGE_WIDTH_MIN = 1; // px
export const EDGE_WIDTH_MAX = 8; // px
/** Linear width map is undefined when all overlaps are equal; use the midpoint. */
export const EDGE_WIDTH_FLAT = (EDGE_WIDTH_MIN + EDGE_WIDTH_MAX) / 2;

/** Single-hue sequential ramp, light to dark. */
export const COLOR_LIGHT: [number, number, number] = [222, 235, 247]; // #deebf7
export const COLOR_DARK: [number, number, number] = [8, 48, 107]; // #08306b
export const COLOR_UNDEFINED = "#b9b9b9";

// Force simulation tuning.
export const CHARGE_STRENGTH = -40;
export const ANCHOR_STRENGTH = 0.12;
export const COLLIDE_PADDING = 2;
export const LINK_DISTANCE = 60;
export const LINK_SCALE = 1.0;

/** Hard cap on how many nodes the UI will request/draw. */
export const MAX_TOP_K = 200;
