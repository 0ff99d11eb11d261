/** Readers for the dataset pipeline's output artifacts. */
import * as fs from "fs";

export interface DatasetSample {
  image: string;
  recipe_id: string;
  split: "train" | "val" | "test";
  basis: string;
  kcal: number;
  fat: number;
  protein: number;
  carbs: number;
  label_indices: number[];
}

export interface VocabEntry {
  rank: number;
  foodId: string;
  name: string;
  count: number;
}

export function readDataset(path: string): DatasetSample[] {
  return fs
    .readFileSync(path, "utf-8")
    .split("\n")
    .filter((l) => l.trim().length > 0)
    .map((l) => JSON.parse(l) as DatasetSample);
}

export function readVocab(path: string): VocabEntry[] {
  return fs
    .readFileSync(path, "utf-8")
    .split("\n")
    .filter((l) => l.trim().length > 0)
    .map((line) => {
      const [rank, foodId, name, count] = line.split("\t");
      return { rank: Number(rank), foodId, name, count: Number(count) };
    });
}

/** Multi-hot label vector from a sample's label indices. */
export function multiHot(indices: number[], vocabSize: number): Float64Array {
  const label = new Float64Array(vocabSize);
  for (const i of indices) {
    if (i < 0 || i >= vocabSize) throw new Error(`label index ${i} out of range`);
    label[i] = 1;
  }
  return label;
}
