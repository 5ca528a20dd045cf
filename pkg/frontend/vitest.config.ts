import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
    // the end-to-end suite drives a live server through real optimizations
    testTimeout: 180_000,
    hookTimeout: 60_000,
  },
});
