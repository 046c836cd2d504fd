/**
 * Minimal vscode API stand-in for unit tests outside the extension host.
 * Only the surface extension.ts touches.
 */

export const registrations: { kind: string; type: string; value: unknown }[] = [];
export const errorMessages: string[] = [];

let activeEditorFile: string | undefined;
let activeEditorLanguage = "miniver";
const settings: Record<string, unknown> = {};

export function __setActiveEditor(file: string | undefined, language = "miniver"): void {
  activeEditorFile = file;
  activeEditorLanguage = language;
}

export function __setSetting(key: string, value: unknown): void {
  settings[key] = value;
}

export function __reset(): void {
  registrations.length = 0;
  errorMessages.length = 0;
  activeEditorFile = undefined;
  for (const key of Object.keys(settings)) {
    delete settings[key];
  }
}

export const window = {
  get activeTextEditor() {
    if (!activeEditorFile) {
      return undefined;
    }
    return {
      document: { fileName: activeEditorFile, languageId: activeEditorLanguage },
    };
  },
  showErrorMessage(message: string): void {
    errorMessages.push(message);
  },
};

export const workspace = {
  getConfiguration(_section: string) {
    return {
      get<T>(key: string): T | undefined {
        return settings[key] as T | undefined;
      },
    };
  },
};

export const debug = {
  registerDebugConfigurationProvider(type: string, provider: unknown) {
    registrations.push({ kind: "configurationProvider", type, value: provider });
    return { dispose() {} };
  },
  registerDebugAdapterDescriptorFactory(type: string, factory: unknown) {
    registrations.push({ kind: "adapterFactory", type, value: factory });
    return { dispose() {} };
  },
};

export class DebugAdapterExecutable {
  constructor(
    public readonly command: string,
    public readonly args: string[]
  ) {}
}
