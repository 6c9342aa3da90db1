/** Slice Settings sidebar. Each control mutates exactly one ViewState field;
 * fields that shape the server query trigger a refetch, encoding-only fields
 * re-render locally. The current state always lands in the URL hash. */

import { MAX_TOP_K } from "./config";
import { clampTopK, ViewState } from "./state";
import { METRIC_DIMS, MetricDim, SchemaPayload } from "./types";

export type StateChange = (field: keyof ViewState, value: unknown) => void;

function labelled(text: string, control: HTMLElement): HTMLElement {
  const wrap = document.createElement("label");
  wrap.className = "control";
  const caption = document.createElement("span");
  caption.textContent = text;
  wrap.appendChild(caption);
  wrap.appendChild(control);
  return wrap;
}

function metricSelect(
  current: MetricDim,
  onPick: (dim: MetricDim) => void
): HTMLSelectElement {
  const select = document.createElement("select");
  for (const dim of METRIC_DIMS) {
    const option = document.createElement("option");
    option.value = dim;
    option.textContent = dim.replace(/_/g, " ");
    if (dim === current) option.selected = true;
    select.appendChild(option);
  }
  select.addEventListener("change", () => onPick(select.value as MetricDim));
  return select;
}

function slider(
  min: number,
  max: number,
  step: number,
  value: number,
  onInput: (v: number) => void
): HTMLElement {
  const wrap = document.createElement("div");
  wrap.className = "slider";
  const input = document.createElement("input");
  input.type = "range";
  input.min = String(min);
  input.max = String(max);
  input.step = String(step);
  input.value = String(value);
  const readout = document.createElement("span");
  readout.className = "readout";
  readout.textContent = String(value);
  input.addEventListener("change", () => {
    readout.textContent = input.value;
    onInput(Number(input.value));
  });
  input.addEventListener("input", () => {
    readout.textContent = input.value;
  });
  wrap.appendChild(input);
  wrap.appendChild(readout);
  return wrap;
}

export function buildSidebar(
  root: HTMLElement,
  schema: SchemaPayload,
  state: ViewState,
  onChange: StateChange
): void {
  root.replaceChildren();

  const heading = document.createElement("h2");
  heading.textContent = "Slice Settings";
  root.appendChild(heading);

  const notice = document.createElement("p");
  notice.className = "notice";
  notice.style.display = "none";
  root.appendChild(notice);

  const showNotice = (text: string | null) => {
    notice.textContent = text ?? "";
    notice.style.display = text ? "block" : "none";
  };

  // Layout switch: Force Layout vs Graph Layout.
  const layout = document.createElement("select");
  for (const value of ["force", "graph"] as const) {
    const option = document.createElement("option");
    option.value = value;
    option.textContent = value === "force" ? "Force Layout" : "Graph Layout";
    if (state.layout === value) option.selected = true;
    layout.appendChild(option);
  }
  layout.addEventListener("change", () => onChange("layout", layout.value));
  root.appendChild(labelled("Layout", layout));

  root.appendChild(
    labelled(
      "Color Represents",
      metricSelect(state.colorBy, (dim) => onChange("colorBy", dim))
    )
  );
  root.appendChild(
    labelled(
      "Size Represents",
      metricSelect(state.sizeBy, (dim) => onChange("sizeBy", dim))
    )
  );
  root.appendChild(
    labelled(
      "Sorted By",
      metricSelect(state.sortBy, (dim) => onChange("sortBy", dim))
    )
  );

  root.appendChild(
    labelled(
      `Show Top k Slices (max ${MAX_TOP_K})`,
      slider(1, MAX_TOP_K, 1, state.topK, (v) => {
        const result = clampTopK(v);
        showNotice(result.notice);
        onChange("topK", result.topK);
      })
    )
  );
  root.appendChild(
    labelled(
      "Minimum Slice Size",
      slider(1, Math.max(1, Math.floor(schema.row_count / 10)), 1, state.minSize, (v) =>
        onChange("minSize", Math.floor(v))
      )
    )
  );

  // Overperforming switch.
  const overWrap = document.createElement("label");
  overWrap.className = "control toggle";
  const over = document.createElement("input");
  over.type = "checkbox";
  over.checked = state.overperforming;
  over.addEventListener("change", () => onChange("overperforming", over.checked));
  const overCaption = document.createElement("span");
  overCaption.textContent = "Overperforming";
  overWrap.appendChild(over);
  overWrap.appendChild(overCaption);
  root.appendChild(overWrap);

  // Feature checkboxes.
  const featuresBox = document.createElement("fieldset");
  featuresBox.className = "features";
  const legend = document.createElement("legend");
  legend.textContent = "Features";
  featuresBox.appendChild(legend);
  const selected = new Set(state.features);
  for (const feature of schema.features) {
    const row = document.createElement("label");
    row.className = "feature-row";
    const box = document.createElement("input");
    box.type = "checkbox";
    box.value = feature.name;
    box.checked = selected.has(feature.name);
    box.addEventListener("change", () => {
      if (box.checked) selected.add(feature.name);
      else selected.delete(feature.name);
      onChange("features", [...selected].sort());
    });
    const name = document.createElement("span");
    name.textContent = `${feature.name} (${feature.values.length})`;
    row.appendChild(box);
    row.appendChild(name);
    featuresBox.appendChild(row);
  }
  root.appendChild(featuresBox);

  root.appendChild(
    labelled(
      "Edge Force Strength",
      slider(0, 1, 0.05, state.edgeForceStrength, (v) =>
        onChange("edgeForceStrength", v)
      )
    )
  );
  root.appendChild(
    labelled(
      "Edge Filtering (min overlap)",
      slider(1, 500, 1, state.edgeMinOverlap, (v) =>
        onChange("edgeMinOverlap", Math.floor(v))
      )
    )
  );

  // Inline API error surface; stays empty until a request fails.
  const error = document.createElement("p");
  error.className = "api-error";
  error.style.display = "none";
  error.dataset.role = "api-error";
  root.appendChild(error);
}

export function showApiError(root: HTMLElement, message: string | null): void {
  const error = root.querySelector<HTMLElement>('[data-role="api-error"]');
  if (!error) return;
  error.textContent = message ?? "";
  error.style.display = message ? "block" : "none";
}
