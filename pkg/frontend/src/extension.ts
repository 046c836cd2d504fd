import * as fs from "fs";
import * as vscode from "vscode";

import { looksLikePath, resolveLaunchConfig, VerdapSettings } from "./config";

export function activate(context: vscode.ExtensionContext): void {
  context.subscriptions.push(
    vscode.debug.registerDebugConfigurationProvider(
      "verdap",
      new VerdapConfigurationProvider()
    ),
    vscode.debug.registerDebugAdapterDescriptorFactory(
      "verdap",
      new VerdapAdapterFactory()
    )
  );
}

export function deactivate(): void {
  // one adapter child process per session; nothing shared to tear down
}

function currentSettings(): VerdapSettings {
  const section = vscode.workspace.getConfiguration("verdap");
  return {
    solver: section.get<string>("solver") || undefined,
    timeoutMs: section.get<number>("timeoutMs"),
  };
}

export class VerdapConfigurationProvider
  implements vscode.DebugConfigurationProvider
{
  resolveDebugConfiguration(
    _folder: vscode.WorkspaceFolder | undefined,
    config: vscode.DebugConfiguration
  ): vscode.ProviderResult<vscode.DebugConfiguration> {
    const editor = vscode.window.activeTextEditor;
    const activeFile =
      editor && editor.document.languageId === "miniver"
        ? editor.document.fileName
        : undefined;
    const resolution = resolveLaunchConfig(config, activeFile, currentSettings());
    if ("error" in resolution) {
      vscode.window.showErrorMessage(resolution.error);
      return undefined; // abort the session cleanly
    }
    return resolution.config as vscode.DebugConfiguration;
  }
}

export class VerdapAdapterFactory
  implements vscode.DebugAdapterDescriptorFactory
{
  createDebugAdapterDescriptor(
    _session: vscode.DebugSession
  ): vscode.ProviderResult<vscode.DebugAdapterDescriptor> {
    const adapterPath =
      vscode.workspace.getConfiguration("verdap").get<string>("adapterPath") ||
      "verdap";
    if (looksLikePath(adapterPath) && !fs.existsSync(adapterPath)) {
      vscode.window.showErrorMessage(
        `verdap: adapter not found at "${adapterPath}" — set verdap.adapterPath.`
      );
      return undefined;
    }
    return new vscode.DebugAdapterExecutable(adapterPath, ["dap"]);
  }
}
