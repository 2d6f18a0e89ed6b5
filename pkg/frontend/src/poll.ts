// Polling loop: fetch, render, repeat. Each view owns an independent loop;
// a failed poll shows the error and keeps polling (the backend may be
// restarting). The interval comes from the API's meta endpoint.

export interface PollHandle {
  stop(): void;
}

export function startPolling(
  tick: () => Promise<void>,
  intervalMs: number,
  onError: (err: unknown) => void = () => {},
): PollHandle {
  let stopped = false;
  let timer: ReturnType<typeof setInterval> | null = null;
  const run = () => {
    tick().catch(onError);
  };
  run();
  timer = setInterval(() => {
    if (!stopped) run();
  }, intervalMs);
  return {
    stop() {
      stopped = true;
      if (timer !== null) clearInterval(timer);
    },
  };
}
