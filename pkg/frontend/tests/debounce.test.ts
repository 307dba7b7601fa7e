import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { debounce } from "../src/debounce.js";

describe("debounce", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("delivers only the last value of a burst", () => {
    const seen: number[] = [];
    const d = debounce<number>((v) => seen.push(v), 100);
    d.call(1);
    vi.advanceTimersByTime(50);
    d.call(2);
    vi.advanceTimersByTime(50);
    d.call(3);
    vi.advanceTimersByTime(100);
    expect(seen).toEqual([3]);
  });

  it("fires once per settled burst", () => {
    const seen: number[] = [];
    const d = debounce<number>((v) => seen.push(v), 100);
    d.call(1);
    vi.advanceTimersByTime(150);
    d.call(2);
    vi.advanceTimersByTime(150);
    expect(seen).toEqual([1, 2]);
  });

  it("does not fire before the interval elapses", () => {
    const seen: number[] = [];
    const d = debounce<number>((v) => seen.push(v), 100);
    d.call(1);
    vi.advanceTimersByTime(99);
    expect(seen).toEqual([]);
  });

  it("flush delivers the pending value immediately, once", () => {
    const seen: number[] = [];
    const d = debounce<number>((v) => seen.push(v), 100);
    d.call(7);
    d.flush();
    expect(seen).toEqual([7]);
    vi.advanceTimersByTime(200);
    expect(seen).toEqual([7]);
  });

  it("flush with nothing pending is a no-op", () => {
    const seen: number[] = [];
    const d = debounce<number>((v) => seen.push(v), 100);
    d.flush();
    expect(seen).toEqual([]);
  });

  it("dispose cancels the pending delivery", () => {
    const seen: number[] = [];
    const d = debounce<number>((v) => seen.push(v), 100);
    d.call(1);
    d.dispose();
    vi.advanceTimersByTime(200);
    expect(seen).toEqual([]);
  });
});
