import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    testTimeout: 60_000,
    hookTimeout: 60_000,
    // test files share ports with nothing, but keep runs sequential so two
    // fixture servers never compete for the single CPU
    fileParallelism: false,
  },
});
