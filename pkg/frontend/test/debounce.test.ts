import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { debounce, LatestOnly } from "../src/debounce.js";

describe("debounce", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("fires once on the trailing edge with the last arguments", () => {
    const seen: number[] = [];
    const d = debounce((v: number) => seen.push(v), 300);
    for (let i = 0; i < 10; i++) {
      d(i);
      vi.advanceTimersByTime(100); // each call lands inside the window
    }
    expect(seen).toEqual([]); // never 300ms of silence during the burst
    vi.advanceTimersByTime(300);
    expect(seen).toEqual([9]);
  });

  it("cancel drops the pending call", () => {
    const fn = vi.fn();
    const d = debounce(fn, 300);
    d();
    d.cancel();
    vi.advanceTimersByTime(1000);
    expect(fn).not.toHaveBeenCalled();
  });

  it("flush runs the pending call immediately", () => {
    const fn = vi.fn();
    const d = debounce(fn, 300);
    d();
    d.flush();
    expect(fn).toHaveBeenCalledTimes(1);
    vi.advanceTimersByTime(1000);
    expect(fn).toHaveBeenCalledTimes(1);
  });
});

describe("LatestOnly", () => {
  it("aborts the previous run when a new one starts", async () => {
    const gate = new LatestOnly();
    const aborted: boolean[] = [false, false];
    const first = gate.run(async (signal) => {
      await new Promise((r) => setTimeout(r, 1));
      aborted[0] = signal.aborted;
      return 1;
    });
    const second = gate.run(async (signal) => {
      await new Promise((r) => setTimeout(r, 1));
      aborted[1] = signal.aborted;
      return 2;
    });
    await Promise.all([first, second]);
    expect(aborted).toEqual([true, false]);
  });
});
