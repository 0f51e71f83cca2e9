/** Shared fixtures and a scriptable fetch for the test suite. */

import { Draft, ItemDetail, QueueItem } from "../src/types.js";

export function queueItem(overrides: Partial<QueueItem> = {}): QueueItem {
  return {
    item_id: "item-1",
    status: "Pending",
    category: "Affected",
    cvss_score: 7.5,
    software: "LabFlow Analyzer",
    notification_snippet: "OpenSSL timing side channel",
    flags: [],
    ...overrides,
  };
}

export function draft(overrides: Partial<Draft> = {}): Draft {
  return {
    asset_id: "A-0002",
    notification_id: "N-0002",
    cvss_version: "3.1",
    raw: {},
    vex_category: "Affected",
    vex_justification: "NA",
    raw_justification_text: "",
    internal_comment: "OpenSSL is used for TLS termination.",
    customer_comment: "A fix is planned.",
    vector_text: null,
    vector: "CVSS:3.1/CR:H/MAV:A/MC:H",
    correction_log: ["R4"],
    flags: [],
    truncated_tasks: [],
    cvss_score: 7.5,
    timing_s: 0.01,
    ...overrides,
  };
}

export function itemDetail(overrides: Partial<ItemDetail> = {}): ItemDetail {
  return {
    item_id: "item-1",
    status: "Pending",
    category: "Affected",
    justification: "NA",
    cvss_score: 7.5,
    flags: [],
    correction_log: ["R4"],
    display: { software: "LabFlow Analyzer", notification_snippet: "OpenSSL ..." },
    reviewer: null,
    decided_at: null,
    enqueued_at: 1.0,
    note: "",
    edited_fields: null,
    draft: draft(),
    ...overrides,
  };
}

export interface Scripted {
  match: (url: string, init?: RequestInit) => boolean;
  status: number;
  body: unknown;
}

/** A fetch implementation driven by an ordered script of responses. */
export function scriptedFetch(script: Scripted[]) {
  const calls: { url: string; init?: RequestInit }[] = [];
  const impl = async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    calls.push({ url, init });
    const index = script.findIndex((entry) => entry.match(url, init));
    if (index < 0) {
      return new Response(JSON.stringify({ detail: "unexpected request" }), {
        status: 500,
        headers: { "Content-Type": "application/json" },
      });
    }
    const entry = script[index]!;
    return new Response(JSON.stringify(entry.body), {
      status: entry.status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { impl: impl as typeof fetch, calls };
}
