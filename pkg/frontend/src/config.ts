/**
 * Launch-configuration resolution, kept free of any vscode imports so it is
 * unit-testable: fill `program` from the active editor, force stopOnEntry,
 * and merge solver settings into launches that leave them out.
 */

export interface LaunchConfig {
  type?: string;
  request?: string;
  name?: string;
  program?: string;
  stopOnEntry?: boolean;
  solver?: string;
  timeoutMs?: number;
  bruteforceBound?: number;
  [key: string]: unknown;
}

export interface VerdapSettings {
  solver?: string;
  timeoutMs?: number;
}

export type Resolution = { config: LaunchConfig } | { error: string };

export function resolveLaunchConfig(
  config: LaunchConfig,
  activeMiniverFile: string | undefined,
  settings: VerdapSettings
): Resolution {
  const resolved: LaunchConfig = { ...config };
  if (!resolved.type) {
    resolved.type = "verdap";
  }
  if (!resolved.request) {
    resolved.request = "launch";
  }
  if (!resolved.name) {
    resolved.name = "Verify current file";
  }
  if (!resolved.program) {
    if (!activeMiniverFile) {
      return {
        error:
          "verdap: no program to verify — open a MiniVer (.mv) file or set \"program\" in the launch configuration.",
      };
    }
    resolved.program = activeMiniverFile;
  }
  // Symbolic debugging has no sensible free-running start: every branch
  // begins paused regardless of what the configuration says.
  resolved.stopOnEntry = true;
  if (resolved.solver === undefined && settings.solver) {
    resolved.solver = settings.solver;
  }
  if (resolved.timeoutMs === undefined && settings.timeoutMs !== undefined) {
    resolved.timeoutMs = settings.timeoutMs;
  }
  return { config: resolved };
}

/** True when the adapter setting points at a path that must exist (rather
 * than a bare command name resolved through PATH). */
export function looksLikePath(adapter: string): boolean {
  return adapter.includes("/") || adapter.includes("\\");
}
