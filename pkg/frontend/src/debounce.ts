// Debounce with trailing-edge semantics plus an abort handle, so rapid
// widget movement coalesces to at most one in-flight request.

export interface Debounced<A extends unknown[]> {
  (...args: A): void;
  cancel(): void;
  flush(): void;
  pending(): boolean;
}

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
): Debounced<A> {
  let timer: ReturnType<typeof setTimeout> | null = null;
  let lastArgs: A | null = null;

  const invoke = () => {
    timer = null;
    if (lastArgs !== null) {
      const args = lastArgs;
      lastArgs = null;
      fn(...args);
    }
  };

  const wrapped = (...args: A) => {
    lastArgs = args;
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(invoke, waitMs);
  };
  wrapped.cancel = () => {
    if (timer !== null) clearTimeout(timer);
    timer = null;
    lastArgs = null;
  };
  wrapped.flush = () => {
    if (timer !== null) {
      clearTimeout(timer);
      invoke();
    }
  };
  wrapped.pending = () => timer !== null;
  return wrapped;
}

/** Serializes async work: starting a new run aborts the previous one. */
export class LatestOnly {
  private controller: AbortController | null = null;

  run<T>(work: (signal: AbortSignal) => Promise<T>): Promise<T> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    return work(controller.signal);
  }

  abort(): void {
    this.controller?.abort();
    this.controller = null;
  }

  get inFlight(): boolean {
    return this.controller !== null && !this.controller.signal.aborted;
  }
}
