/**
 * Scripted DAP test client: spawns the adapter process and exchanges
 * Content-Length framed JSON over its stdio, collecting every message.
 */

import { ChildProcess, spawn } from "node:child_process";

export interface Message {
  [key: string]: unknown;
  type?: string;
  seq?: number;
  request_seq?: number;
  event?: string;
  command?: string;
  success?: boolean;
  body?: any;
}

export class DapClient {
  private child: ChildProcess;
  private buffer = Buffer.alloc(0);
  private pending: Message[] = [];
  private waiters: ((message: Message | null) => void)[] = [];
  private closed = false;
  private seq = 0;

  readonly transcript: Message[] = [];

  constructor(command: string, args: string[]) {
    this.child = spawn(command, args, { stdio: ["pipe", "pipe", "inherit"] });
    this.child.stdout!.on("data", (chunk: Buffer) => {
      this.buffer = Buffer.concat([this.buffer, chunk]);
      this.drainBuffer();
    });
    this.child.stdout!.on("close", () => {
      this.closed = true;
      while (this.waiters.length > 0) {
        this.waiters.shift()!(null);
      }
    });
  }

  private drainBuffer(): void {
    for (;;) {
      const headerEnd = this.buffer.indexOf("\r\n\r\n");
      if (headerEnd < 0) {
        return;
      }
      const header = this.buffer.subarray(0, headerEnd).toString("ascii");
      const match = /content-length:\s*(\d+)/i.exec(header);
      if (!match) {
        throw new Error(`malformed DAP header: ${header}`);
      }
      const length = Number(match[1]);
      const start = headerEnd + 4;
      if (this.buffer.length < start + length) {
        return;
      }
      const body = this.buffer.subarray(start, start + length).toString("utf8");
      this.buffer = this.buffer.subarray(start + length);
      const message = JSON.parse(body) as Message;
      this.transcript.push(message);
      const waiter = this.waiters.shift();
      if (waiter) {
        waiter(message);
      } else {
        this.pending.push(message);
      }
    }
  }

  private nextMessage(timeoutMs = 10000): Promise<Message | null> {
    const queued = this.pending.shift();
    if (queued) {
      return Promise.resolve(queued);
    }
    if (this.closed) {
      return Promise.resolve(null);
    }
    return new Promise((resolve, reject) => {
      const timer = setTimeout(
        () => reject(new Error("timed out waiting for a DAP message")),
        timeoutMs
      );
      this.waiters.push((message) => {
        clearTimeout(timer);
        resolve(message);
      });
    });
  }

  send(command: string, args?: Record<string, unknown>): number {
    this.seq += 1;
    const message: Message = { type: "request", seq: this.seq, command };
    if (args) {
      message.arguments = args;
    }
    const body = Buffer.from(JSON.stringify(message), "utf8");
    this.child.stdin!.write(`Content-Length: ${body.length}\r\n\r\n`);
    this.child.stdin!.write(body);
    return this.seq;
  }

  /** Send a request and wait for its response; interleaved events are
   * captured into the transcript on the way. */
  async request(command: string, args?: Record<string, unknown>): Promise<Message> {
    const seq = this.send(command, args);
    for (;;) {
      const message = await this.nextMessage();
      if (message === null) {
        throw new Error(`stream closed before response to ${command}`);
      }
      if (message.type === "response" && message.request_seq === seq) {
        return message;
      }
    }
  }

  /** Wait until an event with this name is in the transcript. */
  async waitForEvent(name: string): Promise<Message> {
    const seen = this.transcript.find((m) => m.type === "event" && m.event === name);
    if (seen) {
      return seen;
    }
    for (;;) {
      const message = await this.nextMessage();
      if (message === null) {
        throw new Error(`stream closed before event ${name}`);
      }
      if (message.type === "event" && message.event === name) {
        return message;
      }
    }
  }

  async shutdown(): Promise<number> {
    this.child.stdin!.end();
    return new Promise((resolve) => {
      this.child.on("exit", (code) => resolve(code ?? -1));
      setTimeout(() => {
        if (this.child.exitCode === null) {
          this.child.kill();
        }
      }, 5000).unref();
    });
  }
}
