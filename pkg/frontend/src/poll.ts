// Job polling: at least one second between polls, stop on terminal states.

import type { ApiClient } from "./api.js";
import { TERMINAL_STATES, type Job } from "./types.js";

const MIN_INTERVAL_MS = 1000;

export interface PollOptions {
  intervalMs?: number;
  onUpdate?: (job: Job) => void;
  maxPolls?: number;
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export async function pollJob(
  api: ApiClient,
  jobId: string,
  options: PollOptions = {},
): Promise<Job> {
  const interval = Math.max(MIN_INTERVAL_MS, options.intervalMs ?? MIN_INTERVAL_MS);
  const maxPolls = options.maxPolls ?? Number.POSITIVE_INFINITY;
  let polls = 0;
  for (;;) {
    const job = await api.getJob(jobId);
    options.onUpdate?.(job);
    polls += 1;
    if (TERMINAL_STATES.has(job.state)) {
      return job;
    }
    if (polls >= maxPolls) {
      throw new Error(`job ${jobId} still ${job.state} after ${polls} polls`);
    }
    await sleep(interval);
  }
}
