/** Session-run state machine: a monotone cursor over the plan's timeline
 * plus the draft rankings collected for clips already shown. */

import type { ClipItem, PlanItem, RankingSubmission, SessionPlan } from "./types.js";

export interface RankingDraft {
  clip_id: string;
  score: number | null;
  evoked_emotion: number | null;
  span_start: number | null;
  span_end: number | null;
  notes: string;
}

export function validatePlanShape(plan: SessionPlan): string[] {
  const problems: string[] = [];
  if (!plan || !Array.isArray(plan.items) || plan.items.length === 0) {
    return ["plan has no items"];
  }
  if (plan.items[0].kind !== "rest") problems.push("plan does not start with a rest block");
  for (const item of plan.items) {
    if (item.kind !== "rest" && item.kind !== "clip") {
      problems.push(`unknown item kind ${(item as PlanItem).kind}`);
    }
    if (item.duration_s <= 0) problems.push("item with non-positive duration");
    if (item.kind === "clip" && !item.clip_id) problems.push("clip block without id");
  }
  return problems;
}

export class SessionRunState {
  readonly plan: SessionPlan;
  private cursorIndex = 0;
  private shown = new Set<string>();
  readonly drafts = new Map<string, RankingDraft>();

  constructor(plan: SessionPlan) {
    const problems = validatePlanShape(plan);
    if (problems.length) {
      throw new Error(`invalid plan: ${problems.join("; ")}`);
    }
    this.plan = plan;
    this.markShown();
  }

  get cursor(): number {
    return this.cursorIndex;
  }

  get current(): PlanItem | null {
    return this.cursorIndex < this.plan.items.length
      ? this.plan.items[this.cursorIndex]
      : null;
  }

  get atLastItem(): boolean {
    return this.cursorIndex === this.plan.items.length - 1;
  }

  get finished(): boolean {
    return this.cursorIndex >= this.plan.items.length;
  }

  /** Clips the subject has actually been shown, in plan order. */
  get shownClips(): ClipItem[] {
    return this.plan.items.filter(
      (item): item is ClipItem => item.kind === "clip" && this.shown.has(item.clip_id),
    );
  }

  private markShown(): void {
    const item = this.current;
    if (item && item.kind === "clip") {
      this.shown.add(item.clip_id);
      if (!this.drafts.has(item.clip_id)) {
        this.drafts.set(item.clip_id, {
          clip_id: item.clip_id,
          score: null,
          evoked_emotion: null,
          span_start: null,
          span_end: null,
          notes: "",
        });
      }
    }
  }

  /** The cursor only ever moves forward. */
  advance(): void {
    if (this.finished) return;
    this.cursorIndex += 1;
    this.markShown();
  }

  finishSession(): void {
    while (!this.finished) this.advance();
  }

  updateDraft(clipId: string, patch: Partial<RankingDraft>): void {
    if (!this.shown.has(clipId)) {
      throw new Error(`clip ${clipId} has not been shown yet`);
    }
    const draft = this.drafts.get(clipId)!;
    Object.assign(draft, patch, { clip_id: clipId });
  }

  draftProblems(): string[] {
    const problems: string[] = [];
    for (const clip of this.shownClips) {
      const draft = this.drafts.get(clip.clip_id);
      const score = draft?.score;
      if (score == null) {
        problems.push(`${clip.clip_id}: score missing`);
      } else if (!Number.isInteger(score) || score < 1 || score > 10) {
        problems.push(`${clip.clip_id}: score must be an integer 1-10`);
      }
      if (draft && draft.span_start != null && draft.span_end != null) {
        if (draft.span_end <= draft.span_start) {
          problems.push(`${clip.clip_id}: effective span end must be after start`);
        }
      }
    }
    return problems;
  }

  get readyToSubmit(): boolean {
    return this.finished && this.shownClips.length > 0 && this.draftProblems().length === 0;
  }

  toSubmission(): RankingSubmission[] {
    const problems = this.draftProblems();
    if (problems.length) {
      throw new Error(`rankings incomplete: ${problems.join("; ")}`);
    }
    return this.shownClips.map((clip) => {
      const draft = this.drafts.get(clip.clip_id)!;
      const entry: RankingSubmission = {
        clip_id: clip.clip_id,
        score: draft.score!,
        notes: draft.notes,
      };
      if (draft.evoked_emotion != null) entry.evoked_emotion = draft.evoked_emotion;
      if (draft.span_start != null && draft.span_end != null) {
        entry.effective_span = [draft.span_start, draft.span_end];
      }
      return entry;
    });
  }
}
