export * from "./skeleton.js";
export * from "./poses.js";
export * from "./conditions.js";
export * from "./chroma.js";
export * from "./renderer.js";
export * from "./protocol.js";
export * from "./experiment.js";
