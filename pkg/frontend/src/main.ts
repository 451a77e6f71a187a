import { createApp } from "./app.js";

const params = new URLSearchParams(window.location.search);
const server = params.get("server") ?? "ws://127.0.0.1:8765/session";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app element");

createApp(root, { url: server });
