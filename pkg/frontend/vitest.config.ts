import * as path from "node:path";
import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    testTimeout: 30000,
  },
  resolve: {
    // unit tests run outside the extension host; alias the vscode API to
    // the local stub
    alias: {
      vscode: path.resolve(__dirname, "test", "vscode-stub.ts"),
    },
  },
});
