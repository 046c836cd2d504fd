"use strict";
var __createBinding = (this && this.__createBinding) || (Object.create ? (function(o, m, k, k2) {
    if (k2 === undefined) k2 = k;
    var desc = Object.getOwnPropertyDescriptor(m, k);
    if (!desc || ("get" in desc ? !m.__esModule : desc.writable || desc.configurable)) {
      desc = { enumerable: true, get: function() { return m[k]; } };
    }
    Object.defineProperty(o, k2, desc);
}) : (function(o, m, k, k2) {
    if (k2 === undefined) k2 = k;
    o[k2] = m[k];
}));
var __setModuleDefault = (this && this.__setModuleDefault) || (Object.create ? (function(o, v) {
    Object.defineProperty(o, "default", { enumerable: true, value: v });
}) : function(o, v) {
    o["default"] = v;
});
var __importStar = (this && this.__importStar) || (function () {
    var ownKeys = function(o) {
        ownKeys = Object.getOwnPropertyNames || function (o) {
            var ar = [];
            for (var k in o) if (Object.prototype.hasOwnProperty.call(o, k)) ar[ar.length] = k;
            return ar;
        };
        return ownKeys(o);
    };
    return function (mod) {
        if (mod && mod.__esModule) return mod;
        var result = {};
        if (mod != null) for (var k = ownKeys(mod), i = 0; i < k.length; i++) if (k[i] !== "default") __createBinding(result, mod, k[i]);
        __setModuleDefault(result, mod);
        return result;
    };
})();
Object.defineProperty(exports, "__esModule", { value: true });
exports.VerdapAdapterFactory = exports.VerdapConfigurationProvider = void 0;
exports.activate = activate;
exports.deactivate = deactivate;
const fs = __importStar(require("fs"));
const vscode = __importStar(require("vscode"));
const config_1 = require("./config");
function activate(context) {
    context.subscriptions.push(vscode.debug.registerDebugConfigurationProvider("verdap", new VerdapConfigurationProvider()), vscode.debug.registerDebugAdapterDescriptorFactory("verdap", new VerdapAdapterFactory()));
}
function deactivate() {
    // one adapter child process per session; nothing shared to tear down
}
function currentSettings() {
    const section = vscode.workspace.getConfiguration("verdap");
    return {
        solver: section.get("solver") || undefined,
        timeoutMs: section.get("timeoutMs"),
    };
}
class VerdapConfigurationProvider {
    resolveDebugConfiguration(_folder, config) {
        const editor = vscode.window.activeTextEditor;
        const activeFile = editor && editor.document.languageId === "miniver"
            ? editor.document.fileName
            : undefined;
        const resolution = (0, config_1.resolveLaunchConfig)(config, activeFile, currentSettings());
        if ("error" in resolution) {
            vscode.window.showErrorMessage(resolution.error);
            return undefined; // abort the session cleanly
        }
        return resolution.config;
    }
}
exports.VerdapConfigurationProvider = VerdapConfigurationProvider;
class VerdapAdapterFactory {
    createDebugAdapterDescriptor(_session) {
        const adapterPath = vscode.workspace.getConfiguration("verdap").get("adapterPath") ||
            "verdap";
        if ((0, config_1.looksLikePath)(adapterPath) && !fs.existsSync(adapterPath)) {
            vscode.window.showErrorMessage(`verdap: adapter not found at "${adapterPath}" — set verdap.adapterPath.`);
            return undefined;
        }
        return new vscode.DebugAdapterExecutable(adapterPath, ["dap"]);
    }
}
exports.VerdapAdapterFactory = VerdapAdapterFactory;
//# sourceMappingURL=extension.js.map