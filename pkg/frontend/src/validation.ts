/**
 * Client-side mirror of the evaluation invariants.
 *
 * The edit form must not be able to produce a payload the server would
 * reject with 422; everything here matches the server's rules exactly.
 */

import {
  DecisionPayload,
  EditableFields,
  ItemDetail,
  VexCategory,
  VexJustification,
} from "./types.js";

/** Justification is meaningful only for NotAffected evaluations. */
export function justificationEnabled(category: VexCategory | null | undefined): boolean {
  return category === "NotAffected";
}

/** The state an edit would leave the evaluation in. */
function effective(item: ItemDetail, edits: EditableFields) {
  return {
    category:
      edits.vex_category !== undefined ? edits.vex_category : item.category,
    justification:
      edits.vex_justification !== undefined
        ? edits.vex_justification
        : item.justification,
    vector: edits.vector !== undefined ? edits.vector : item.draft.vector,
  };
}

/** All invariant violations an edit would introduce; empty means valid. */
export function editViolations(item: ItemDetail, edits: EditableFields): string[] {
  const violations: string[] = [];
  const state = effective(item, edits);
  const justification: VexJustification = state.justification ?? "NA";
  if (justification !== "NA" && state.category !== "NotAffected") {
    violations.push(
      "a justification other than NA requires category NotAffected",
    );
  }
  if (state.category === null) {
    violations.push("the evaluation needs a category before it can be accepted");
  }
  if (state.category === "NotAffected" && state.vector) {
    violations.push("a NotAffected evaluation must not carry a vector");
  }
  return violations;
}

/**
 * Build a decision payload, refusing invariant-violating edits up front.
 * Returns either {payload} or {errors} - never a payload the server would
 * 422 on for invariant reasons.
 */
export function buildDecision(
  item: ItemDetail,
  action: "Accept" | "Edit" | "Reject",
  edits?: EditableFields,
  note?: string,
): { payload?: DecisionPayload; errors: string[] } {
  if (action === "Reject") {
    return { payload: { action, note }, errors: [] };
  }
  if (action === "Accept") {
    const errors = editViolations(item, {});
    return errors.length ? { errors } : { payload: { action, note }, errors: [] };
  }
  if (!edits || Object.keys(edits).length === 0) {
    return { errors: ["an Edit decision needs at least one changed field"] };
  }
  const errors = editViolations(item, edits);
  if (errors.length) return { errors };
  return { payload: { action, edited_fields: edits, note }, errors: [] };
}
