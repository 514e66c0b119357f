/** Countdown arithmetic with an injectable clock (tests pass a fake). */

export function formatClock(totalSeconds: number): string {
  const s = Math.max(0, Math.ceil(totalSeconds));
  const minutes = Math.floor(s / 60);
  const seconds = s % 60;
  return `${minutes}:${seconds.toString().padStart(2, "0")}`;
}

export class Countdown {
  private startedAt: number | null = null;
  private consumedMs = 0;

  constructor(
    public readonly durationS: number,
    private now: () => number = () => Date.now(),
  ) {}

  start(): void {
    if (this.startedAt === null) this.startedAt = this.now();
  }

  pause(): void {
    if (this.startedAt !== null) {
      this.consumedMs += this.now() - this.startedAt;
      this.startedAt = null;
    }
  }

  get running(): boolean {
    return this.startedAt !== null;
  }

  get elapsedS(): number {
    const live = this.startedAt === null ? 0 : this.now() - this.startedAt;
    return (this.consumedMs + live) / 1000;
  }

  get remainingS(): number {
    return Math.max(0, this.durationS - this.elapsedS);
  }

  get done(): boolean {
    return this.remainingS <= 0;
  }

  get display(): string {
    return formatClock(this.remainingS);
  }
}
