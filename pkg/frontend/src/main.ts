import { createApp } from "./app.js";

const host = document.getElementById("app");
if (host) {
  createApp(host).catch((err) => {
    host.textContent = `failed to start: ${err}`;
  });
}
