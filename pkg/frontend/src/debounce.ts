/**
 * Trailing debounce with last-write-wins semantics: each call restarts
 * the timer and only the most recent value is delivered once the burst
 * settles. `flush` delivers immediately; `dispose` cancels.
 */
export function debounce<A>(
  fn: (value: A) => void,
  ms: number,
): { call: (value: A) => void; flush: () => void; dispose: () => void } {
  let timer: ReturnType<typeof setTimeout> | undefined;
  let lastValue: A | undefined;
  let pending = false;

  const fire = () => {
    timer = undefined;
    if (pending) {
      pending = false;
      fn(lastValue as A);
    }
  };

  return {
    call(value: A) {
      lastValue = value;
      pending = true;
      if (timer !== undefined) clearTimeout(timer);
      timer = setTimeout(fire, ms);
    },
    flush() {
      if (timer !== undefined) clearTimeout(timer);
      fire();
    },
    dispose() {
      if (timer !== undefined) clearTimeout(timer);
      timer = undefined;
      pending = false;
    },
  };
}
