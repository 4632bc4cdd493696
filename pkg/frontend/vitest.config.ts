import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    environment: "node",
    testTimeout: 15000,
    // contract setup builds a session and spawns the python service
    hookTimeout: 45000,
  },
});
