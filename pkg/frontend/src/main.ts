import { createApp } from "./app.js";

function mount(): void {
  const root = document.getElementById("app");
  if (root) createApp(root);
}

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", mount);
} else {
  mount();
}
