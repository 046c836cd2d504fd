import { describe, expect, it } from "vitest";

import { looksLikePath, resolveLaunchConfig } from "../src/config";

describe("resolveLaunchConfig", () => {
  it("fills program from the active MiniVer editor", () => {
    const out = resolveLaunchConfig(
      { type: "verdap", request: "launch" },
      "/work/abs.mv",
      {}
    );
    expect("config" in out && out.config.program).toBe("/work/abs.mv");
  });

  it("keeps an explicit program unchanged", () => {
    const out = resolveLaunchConfig(
      { type: "verdap", request: "launch", program: "/x/other.mv" },
      "/work/abs.mv",
      {}
    );
    expect("config" in out && out.config.program).toBe("/x/other.mv");
  });

  it("errors without a program or active editor", () => {
    const out = resolveLaunchConfig({ type: "verdap", request: "launch" }, undefined, {});
    expect("error" in out).toBe(true);
  });

  it("always forces stopOnEntry", () => {
    const out = resolveLaunchConfig(
      { type: "verdap", request: "launch", program: "a.mv", stopOnEntry: false },
      undefined,
      {}
    );
    expect("config" in out && out.config.stopOnEntry).toBe(true);
  });

  it("merges solver settings into omissions only", () => {
    const merged = resolveLaunchConfig(
      { program: "a.mv" },
      undefined,
      { solver: "z3 -in", timeoutMs: 500 }
    );
    expect("config" in merged && merged.config.solver).toBe("z3 -in");
    expect("config" in merged && merged.config.timeoutMs).toBe(500);

    const explicit = resolveLaunchConfig(
      { program: "a.mv", solver: "cvc5 --lang smt2", timeoutMs: 9 },
      undefined,
      { solver: "z3 -in", timeoutMs: 500 }
    );
    expect("config" in explicit && explicit.config.solver).toBe("cvc5 --lang smt2");
    expect("config" in explicit && explicit.config.timeoutMs).toBe(9);
  });

  it("defaults type, request and name for empty configurations", () => {
    const out = resolveLaunchConfig({}, "/work/abs.mv", {});
    if (!("config" in out)) {
      throw new Error("expected a config");
    }
    expect(out.config.type).toBe("verdap");
    expect(out.config.request).toBe("launch");
    expect(out.config.name).toBeTruthy();
  });
});

describe("looksLikePath", () => {
  it("distinguishes bare commands from paths", () => {
    expect(looksLikePath("verdap")).toBe(false);
    expect(looksLikePath("/usr/local/bin/verdap")).toBe(true);
    expect(looksLikePath("bin\\verdap.exe")).toBe(true);
  });
});
