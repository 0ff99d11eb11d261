export * from "./loss";
export * from "./embeddings";
export * from "./data";
export * from "./model";
export * from "./synthetic";
