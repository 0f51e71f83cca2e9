/**
 * Browser bootstrap: wires the controller and renderers to the DOM.
 *
 * Configuration is a base URL and a bearer token, kept in sessionStorage
 * only (no persistence beyond the tab).
 */

import { ReviewApiClient } from "./api.js";
import { QueueController } from "./controller.js";
import {
  renderBanner,
  renderDetail,
  renderQueue,
  renderToast,
} from "./render.js";
import { EditableFields, ItemDetail } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function readEdits(form: HTMLFormElement, item: ItemDetail): EditableFields {
  const data = new FormData(form);
  const edits: EditableFields = {};
  const category = data.get("vex_category") as string | null;
  if (category && category !== item.category) {
    edits.vex_category = category as EditableFields["vex_category"];
  }
  const justification = data.get("vex_justification") as string | null;
  if (justification && justification !== (item.justification ?? "NA")) {
    edits.vex_justification = justification as EditableFields["vex_justification"];
  }
  for (const key of ["internal_comment", "customer_comment"] as const) {
    const value = data.get(key);
    if (typeof value === "string" && value !== item.draft[key]) {
      edits[key] = value;
    }
  }
  const vector = data.get("vector");
  if (typeof vector === "string" && vector !== (item.draft.vector ?? "")) {
    edits.vector = vector === "" ? null : vector;
  }
  return edits;
}

export function start(): void {
  const baseUrl =
    sessionStorage.getItem("vulneval.baseUrl") ?? "http://127.0.0.1:8080";
  const token = sessionStorage.getItem("vulneval.token") ?? undefined;
  const api = new ReviewApiClient({ baseUrl, token });
  const controller = new QueueController(api);

  const queueNode = el<HTMLDivElement>("queue");
  const detailNode = el<HTMLDivElement>("detail");
  const bannerNode = el<HTMLDivElement>("banner");
  const toastNode = el<HTMLDivElement>("toast");
  let current: ItemDetail | null = null;

  function paint(): void {
    queueNode.innerHTML = renderQueue(controller.state.items);
    bannerNode.innerHTML = renderBanner(controller.state.banner);
    toastNode.innerHTML = renderToast(controller.state.toast);
    detailNode.innerHTML = current ? renderDetail(current) : "";
  }

  async function refresh(): Promise<void> {
    await controller.loadQueue();
    paint();
  }

  queueNode.addEventListener("click", async (event) => {
    const row = (event.target as HTMLElement).closest<HTMLElement>(".queue-row");
    if (!row || !row.dataset.itemId) return;
    current = await controller.openItem(row.dataset.itemId);
    paint();
  });

  bannerNode.addEventListener("click", async (event) => {
    if ((event.target as HTMLElement).dataset.action === "retry") {
      await refresh();
    }
  });

  detailNode.addEventListener("click", async (event) => {
    const button = event.target as HTMLElement;
    const action = button.dataset.action;
    if (!action || !current) return;
    event.preventDefault();
    const form = detailNode.querySelector<HTMLFormElement>(".edit-form");
    if (!form) return;
    const actionName =
      action === "accept" ? "Accept" : action === "edit" ? "Edit" : "Reject";
    const edits = actionName === "Edit" ? readEdits(form, current) : undefined;
    const result = await controller.submit(current, actionName, edits);
    const errorsNode = form.querySelector<HTMLElement>(".form-errors");
    if (result.ok && result.item) {
      current = result.item;
    } else if (result.conflicted) {
      current = result.item ?? current;
    } else if (errorsNode) {
      errorsNode.hidden = false;
      errorsNode.textContent = result.errors.join("; ");
      return; // keep the form state for correction
    }
    paint();
  });

  void refresh();
}

if (typeof document !== "undefined" && document.getElementById("queue")) {
  start();
}
