/**
 * Pure HTML renderers.  Strings in, strings out: every value shown comes
 * straight from an API response field, which keeps these testable without
 * a browser.
 */

import { ItemDetail, QueueItem } from "./types.js";
import { justificationEnabled } from "./validation.js";

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const CORRECTION_CHIPS: Record<string, string> = {
  R1: "vector cleared (rule 1)",
  R2: "justification set to Other (rule 2)",
  R3: "customer comment taken from internal (rule 3)",
  R4: "justification forced to NA, vector format checked (rule 4)",
};

export function correctionChip(ruleId: string): string {
  return CORRECTION_CHIPS[ruleId] ?? ruleId;
}

export function categoryBadge(category: QueueItem["category"]): string {
  const label = category ?? "Uncategorized";
  const cls = category ? category.toLowerCase() : "unknown";
  return `<span class="badge badge-${cls}">${escapeHtml(label)}</span>`;
}

export function renderQueueRow(item: QueueItem): string {
  const score = item.cvss_score === null ? "-" : item.cvss_score.toFixed(1);
  const software = escapeHtml(item.software ?? "");
  const snippet = escapeHtml(item.notification_snippet ?? "");
  const flags = item.flags.length
    ? `<span class="flags">${escapeHtml(item.flags.join(", "))}</span>`
    : "";
  return (
    `<tr class="queue-row" data-item-id="${escapeHtml(item.item_id)}">` +
    `<td>${categoryBadge(item.category)}</td>` +
    `<td class="score">${score}</td>` +
    `<td class="software">${software}</td>` +
    `<td class="snippet">${snippet}${flags}</td>` +
    `<td class="status">${escapeHtml(item.status)}</td>` +
    `</tr>`
  );
}

/** Rows render in the exact order the server returned them. */
export function renderQueue(items: QueueItem[]): string {
  if (items.length === 0) {
    return `<div class="empty-state">No pending evaluations - the queue is clear.</div>`;
  }
  const rows = items.map(renderQueueRow).join("");
  return (
    `<table class="queue"><thead><tr>` +
    `<th>Category</th><th>Score</th><th>Software</th>` +
    `<th>Notification</th><th>Status</th>` +
    `</tr></thead><tbody>${rows}</tbody></table>`
  );
}

export function renderBanner(message: string | null): string {
  if (!message) return "";
  return (
    `<div class="banner banner-error">${escapeHtml(message)} ` +
    `<button data-action="retry">Retry</button></div>`
  );
}

export function renderDetail(item: ItemDetail): string {
  const draft = item.draft;
  const chips = draft.correction_log
    .map((rule) => `<span class="chip">${escapeHtml(correctionChip(rule))}</span>`)
    .join("");
  const flags = draft.flags
    .map((flag) => `<span class="chip chip-flag">${escapeHtml(flag)}</span>`)
    .join("");
  const justificationDisabled = justificationEnabled(item.category) ? "" : " disabled";
  const display = item.display as Record<string, unknown>;
  const field = (key: string) =>
    typeof display[key] === "string" ? escapeHtml(display[key] as string) : "";
  return `
<section class="detail" data-item-id="${escapeHtml(item.item_id)}">
  <header>
    ${categoryBadge(item.category)}
    <span class="status">${escapeHtml(item.status)}</span>
    <span class="key">${escapeHtml(draft.asset_id)} / ${escapeHtml(draft.notification_id)}</span>
  </header>
  <dl class="context">
    <dt>Software</dt><dd>${field("software")}</dd>
    <dt>Product</dt><dd>${field("product")}</dd>
    <dt>Notification</dt><dd>${field("notification_snippet")}</dd>
    <dt>CVSS version</dt><dd>${escapeHtml(draft.cvss_version)}</dd>
  </dl>
  <div class="corrections">${chips}${flags}</div>
  <form class="edit-form">
    <label>Category
      <select name="vex_category">${categoryOptions(item)}</select>
    </label>
    <label>Justification
      <select name="vex_justification"${justificationDisabled}>${justificationOptions(item)}</select>
    </label>
    <label>Internal comment
      <textarea name="internal_comment">${escapeHtml(draft.internal_comment)}</textarea>
    </label>
    <label>Customer comment
      <textarea name="customer_comment">${escapeHtml(draft.customer_comment)}</textarea>
    </label>
    <label>Vector
      <input name="vector" value="${escapeHtml(draft.vector ?? "")}" />
    </label>
    <div class="form-errors" hidden></div>
    <div class="actions">
      <button data-action="accept">Accept</button>
      <button data-action="edit">Save edits</button>
      <button data-action="reject">Reject</button>
    </div>
  </form>
</section>`;
}

function categoryOptions(item: ItemDetail): string {
  // Only the two decidable categories are offered; UnderInvestigation and
  // EndOfLife never reach the queue.
  return ["Affected", "NotAffected"]
    .map((value) => {
      const selected = item.category === value ? " selected" : "";
      return `<option value="${value}"${selected}>${value}</option>`;
    })
    .join("");
}

function justificationOptions(item: ItemDetail): string {
  const values = [
    "NA",
    "VulnerableCodeNotPresent",
    "ComponentNotPresent",
    "VulnerableCodeNotInExecutePath",
    "VulnerableCodeCannotBeControlledByAdversary",
    "InlineMitigationsAlreadyExist",
    "Other",
  ];
  return values
    .map((value) => {
      const selected = item.justification === value ? " selected" : "";
      return `<option value="${value}"${selected}>${value}</option>`;
    })
    .join("");
}

export function renderToast(message: string | null): string {
  if (!message) return "";
  return `<div class="toast">${escapeHtml(message)}</div>`;
}
