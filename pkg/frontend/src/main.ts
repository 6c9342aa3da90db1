/** Application bootstrap: load the schema, restore state from the URL hash,
 * fetch data, render, and keep everything in sync on control changes. */

import { ApiClient, ApiError } from "./api";
import { renderView } from "./render";
import { buildScene } from "./scene";
import { buildSidebar, showApiError } from "./sidebar";
import { decodeHash, encodeHash, needsRefetch, ViewState } from "./state";
import { GraphEdge, SliceSummary } from "./types";

async function boot(): Promise<void> {
  const sidebarEl = document.getElementById("sidebar");
  const viewEl = document.getElementById("view");
  if (!sidebarEl || !viewEl) throw new Error("missing #sidebar or #view");

  const api = new ApiClient();
  const schema = await api.fetchSchema();

  let state: ViewState = decodeHash(window.location.hash);
  let slices: SliceSummary[] = [];
  let edges: GraphEdge[] = [];

  const render = () => {
    const scene = buildScene(slices, edges, state);
    renderView(viewEl, scene, slices, edges, state);
  };

  const refetch = async () => {
    try {
      slices = await api.fetchSlices(state);
      edges = state.layout === "graph" ? (await api.fetchGraph(state)).edges : [];
      showApiError(sidebarEl, null);
    } catch (err) {
      if (err instanceof DOMException && err.name === "AbortError") return;
      if (err instanceof ApiError) {
        showApiError(sidebarEl, err.message);
        return; // keep the previous data on screen; controls stay usable
      }
      throw err;
    }
    render();
  };

  const onChange = (field: keyof ViewState, value: unknown) => {
    state = { ...state, [field]: value } as ViewState;
    window.location.hash = encodeHash(state);
    if (needsRefetch(field)) {
      void refetch();
    } else {
      render();
    }
  };

  buildSidebar(sidebarEl, schema, state, onChange);
  window.addEventListener("hashchange", () => {
    state = decodeHash(window.location.hash);
    buildSidebar(sidebarEl, schema, state, onChange);
    void refetch();
  });

  await refetch();
}

void boot();
