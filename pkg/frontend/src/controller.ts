/**
 * Queue state and the decision flow, independent of the DOM.
 *
 * Rows keep the server's order (priority lives server-side); decisions are
 * optimistic with rollback-by-refetch on 409 conflicts.
 */

import { ApiError, ReviewApiClient } from "./api.js";
import { buildDecision } from "./validation.js";
import {
  DecisionAction,
  EditableFields,
  ItemDetail,
  QueueItem,
} from "./types.js";

export interface QueueState {
  items: QueueItem[];
  nextCursor: string | null;
  banner: string | null;
  toast: string | null;
}

export interface SubmitResult {
  ok: boolean;
  /** form-level messages (invariant violations, 422 details) */
  errors: string[];
  /** true when a 409 conflict was resolved by refreshing the row */
  conflicted: boolean;
  item?: ItemDetail;
}

export class QueueController {
  readonly state: QueueState = {
    items: [],
    nextCursor: null,
    banner: null,
    toast: null,
  };

  constructor(private readonly api: ReviewApiClient) {}

  /** Load (or reload) one page; on failure show a retry banner. */
  async loadQueue(cursor?: string | null): Promise<void> {
    try {
      const page = await this.api.loadQueue(cursor ?? undefined);
      // Server order is authoritative: no client-side sorting, ever.
      this.state.items = cursor ? [...this.state.items, ...page.items] : page.items;
      this.state.nextCursor = page.next_cursor;
      this.state.banner = null;
    } catch (error) {
      this.state.banner =
        error instanceof ApiError
          ? `queue unavailable (${error.status}) - retry`
          : "queue unavailable (network) - retry";
    }
  }

  async openItem(itemId: string): Promise<ItemDetail | null> {
    try {
      return await this.api.getItem(itemId);
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) return null;
      throw error;
    }
  }

  private replaceRow(item: ItemDetail): void {
    this.state.items = this.state.items.map((row) =>
      row.item_id === item.item_id
        ? {
            ...row,
            status: item.status,
            category: item.category,
            cvss_score: item.cvss_score,
            flags: item.flags,
          }
        : row,
    );
  }

  /**
   * Validate, submit, and reconcile one decision.  The row is updated
   * optimistically; a 409 refreshes it from the server instead.
   */
  async submit(
    item: ItemDetail,
    action: DecisionAction,
    edits?: EditableFields,
    note?: string,
  ): Promise<SubmitResult> {
    const { payload, errors } = buildDecision(item, action, edits, note);
    if (!payload) {
      return { ok: false, errors, conflicted: false };
    }
    const before = this.state.items;
    const optimistic: Record<DecisionAction, QueueItem["status"]> = {
      Accept: "Accepted",
      Edit: "Edited",
      Reject: "Rejected",
    };
    this.state.items = before.map((row) =>
      row.item_id === item.item_id ? { ...row, status: optimistic[action] } : row,
    );
    try {
      const updated = await this.api.submitDecision(item.item_id, payload);
      this.replaceRow(updated);
      return { ok: true, errors: [], conflicted: false, item: updated };
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        const fresh = await this.openItem(item.item_id);
        if (fresh) this.replaceRow(fresh);
        this.state.toast = "someone else decided this item first";
        return {
          ok: false,
          errors: [],
          conflicted: true,
          item: fresh ?? undefined,
        };
      }
      this.state.items = before; // roll the optimistic update back
      if (error instanceof ApiError) {
        return { ok: false, errors: [error.detail], conflicted: false };
      }
      throw error;
    }
  }
}
