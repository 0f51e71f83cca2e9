/**
 * Wire types for the review service API, with runtime validation.
 *
 * Every rendered value must be traceable to one of these fields; the zod
 * schemas reject responses that drift from the documented shapes.
 */

import { z } from "zod";

export const VEX_CATEGORIES = [
  "Affected",
  "NotAffected",
  "UnderInvestigation",
  "EndOfLife",
] as const;
export type VexCategory = (typeof VEX_CATEGORIES)[number];

export const VEX_JUSTIFICATIONS = [
  "VulnerableCodeNotPresent",
  "ComponentNotPresent",
  "VulnerableCodeNotInExecutePath",
  "VulnerableCodeCannotBeControlledByAdversary",
  "InlineMitigationsAlreadyExist",
  "Other",
  "NA",
] as const;
export type VexJustification = (typeof VEX_JUSTIFICATIONS)[number];

export const ITEM_STATUSES = ["Pending", "Accepted", "Edited", "Rejected"] as const;
export type ItemStatus = (typeof ITEM_STATUSES)[number];

export const queueItemSchema = z.object({
  item_id: z.string(),
  status: z.enum(ITEM_STATUSES),
  category: z.enum(VEX_CATEGORIES).nullable(),
  cvss_score: z.number().nullable(),
  software: z.string().nullable(),
  notification_snippet: z.string().nullable(),
  flags: z.array(z.string()),
});
export type QueueItem = z.infer<typeof queueItemSchema>;

export const queuePageSchema = z.object({
  items: z.array(queueItemSchema),
  next_cursor: z.string().nullable(),
});
export type QueuePage = z.infer<typeof queuePageSchema>;

export const draftSchema = z.object({
  asset_id: z.string(),
  notification_id: z.string(),
  cvss_version: z.string(),
  raw: z.record(z.string()).optional().default({}),
  vex_category: z.enum(VEX_CATEGORIES).nullable(),
  vex_justification: z.enum(VEX_JUSTIFICATIONS).nullable(),
  raw_justification_text: z.string().optional().default(""),
  internal_comment: z.string(),
  customer_comment: z.string(),
  vector_text: z.string().nullable(),
  vector: z.string().nullable(),
  correction_log: z.array(z.string()),
  flags: z.array(z.string()),
  truncated_tasks: z.array(z.string()).optional().default([]),
  cvss_score: z.number().nullable(),
  timing_s: z.number().nullable().optional(),
});
export type Draft = z.infer<typeof draftSchema>;

export const itemDetailSchema = z.object({
  item_id: z.string(),
  status: z.enum(ITEM_STATUSES),
  category: z.enum(VEX_CATEGORIES).nullable(),
  justification: z.enum(VEX_JUSTIFICATIONS).nullable(),
  cvss_score: z.number().nullable(),
  flags: z.array(z.string()),
  correction_log: z.array(z.string()),
  display: z.record(z.unknown()),
  reviewer: z.string().nullable(),
  decided_at: z.number().nullable(),
  enqueued_at: z.number(),
  note: z.string(),
  edited_fields: z.record(z.unknown()).nullable(),
  draft: draftSchema,
});
export type ItemDetail = z.infer<typeof itemDetailSchema>;

export interface EditableFields {
  vex_category?: VexCategory | null;
  vex_justification?: VexJustification | null;
  internal_comment?: string;
  customer_comment?: string;
  vector?: string | null;
  cvss_score?: number | null;
}

export type DecisionAction = "Accept" | "Edit" | "Reject";

export interface DecisionPayload {
  action: DecisionAction;
  edited_fields?: EditableFields;
  note?: string;
}
