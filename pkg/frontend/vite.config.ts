import { defineConfig } from "vitest/config";

// The dev server proxies API routes to the Python service
// (`termset serve --models manifest.json --port 8000`), keeping the
// browser same-origin.
export default defineConfig({
  server: {
    proxy: {
      "/models": "http://localhost:8000",
      "/sessions": "http://localhost:8000",
    },
  },
  test: {
    environment: "happy-dom",
  },
});
