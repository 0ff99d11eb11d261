/** Deterministic synthetic batches for smoke training. */
import * as tf from "@tensorflow/tfjs";
import { Batch } from "./model";

/** Small deterministic PRNG (mulberry32). */
export function makeRng(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Images whose mean brightness encodes the regression targets, so there is
 * actual signal for the loss to reduce. */
export function syntheticBatches(
  count: number,
  batchSize: number,
  imageSize: number,
  vocabSize: number,
  seed: number,
): Batch[] {
  const rng = makeRng(seed);
  const batches: Batch[] = [];
  const nBatches = Math.ceil(count / batchSize);
  for (let b = 0; b < nBatches; b++) {
    const n = Math.min(batchSize, count - b * batchSize);
    const images = new Float32Array(n * imageSize * imageSize * 3);
    const regression = new Float32Array(n * 4);
    const labels = new Float32Array(n * vocabSize);
    for (let i = 0; i < n; i++) {
      const brightness = rng();
      for (let p = 0; p < imageSize * imageSize * 3; p++) {
        images[i * imageSize * imageSize * 3 + p] =
          brightness * 0.8 + rng() * 0.2;
      }
      regression[i * 4 + 0] = brightness * 5; // kcal-scale target
      regression[i * 4 + 1] = brightness;
      regression[i * 4 + 2] = brightness * 0.5;
      regression[i * 4 + 3] = brightness * 2;
      const nLabels = 1 + Math.floor(rng() * 3);
      for (let k = 0; k < nLabels; k++) {
        labels[i * vocabSize + Math.floor(rng() * vocabSize)] = 1;
      }
    }
    batches.push({
      images: tf.tensor4d(images, [n, imageSize, imageSize, 3]),
      regressionTargets: tf.tensor2d(regression, [n, 4]),
      labels: tf.tensor2d(labels, [n, vocabSize]),
    });
  }
  return batches;
}
