/** Image model with a regression head (kcal, fat, protein, carbs) and a
 * multi-label ingredient head.
 *
 * The backbone is a small randomly-initialized convnet standing in for a
 * pretrained image encoder, which cannot be downloaded in this environment;
 * the head structure and the training loss are the real thing.
 */
import * as tf from "@tensorflow/tfjs";
import { multitaskLossTensor } from "./loss";

export interface ModelConfig {
  imageSize: number;
  vocabSize: number;
  seed: number;
}

export interface MultiTaskModel {
  backbone: tf.LayersModel;
  config: ModelConfig;
  /** Returns [regression [batch,4], logits [batch,vocabSize]]. */
  forward(images: tf.Tensor4D): [tf.Tensor2D, tf.Tensor2D];
}

export function buildModel(config: ModelConfig): MultiTaskModel {
  const { imageSize, vocabSize, seed } = config;
  const input = tf.input({ shape: [imageSize, imageSize, 3] });
  let x = tf.layers
    .conv2d({ filters: 8, kernelSize: 3, activation: "relu", padding: "same",
              kernelInitializer: tf.initializers.glorotUniform({ seed }) })
    .apply(input) as tf.SymbolicTensor;
  x = tf.layers.maxPooling2d({ poolSize: 2 }).apply(x) as tf.SymbolicTensor;
  x = tf.layers
    .conv2d({ filters: 16, kernelSize: 3, activation: "relu", padding: "same",
              kernelInitializer: tf.initializers.glorotUniform({ seed: seed + 1 }) })
    .apply(x) as tf.SymbolicTensor;
  x = tf.layers.globalAveragePooling2d({}).apply(x) as tf.SymbolicTensor;
  const features = tf.layers
    .dense({ units: 32, activation: "relu",
             kernelInitializer: tf.initializers.glorotUniform({ seed: seed + 2 }) })
    .apply(x) as tf.SymbolicTensor;
  const regression = tf.layers
    .dense({ units: 4, name: "regression",
             kernelInitializer: tf.initializers.glorotUniform({ seed: seed + 3 }) })
    .apply(features) as tf.SymbolicTensor;
  const logits = tf.layers
    .dense({ units: vocabSize, name: "ingredient_logits",
             kernelInitializer: tf.initializers.glorotUniform({ seed: seed + 4 }) })
    .apply(features) as tf.SymbolicTensor;
  const backbone = tf.model({ inputs: input, outputs: [regression, logits] });
  return {
    backbone,
    config,
    forward(images) {
      const out = backbone.apply(images) as tf.Tensor2D[];
      return [out[0], out[1]];
    },
  };
}

export interface Batch {
  images: tf.Tensor4D;
  regressionTargets: tf.Tensor2D; // [batch, 4]
  labels: tf.Tensor2D; // [batch, vocabSize]
}

export interface TrainOptions {
  epochs: number;
  batchSize: number;
  gamma: number;
  beta?: number;
  learningRate?: number;
}

/** Minimize the multitask loss over the batches; returns per-epoch mean loss. */
export async function trainModel(
  model: MultiTaskModel,
  batches: Batch[],
  options: TrainOptions,
): Promise<number[]> {
  const { epochs, gamma, beta = 1.0, learningRate = 1e-2 } = options;
  const optimizer = tf.train.adam(learningRate);
  const epochLosses: number[] = [];
  for (let epoch = 0; epoch < epochs; epoch++) {
    let total = 0;
    for (const batch of batches) {
      const value = optimizer.minimize(() => {
        const [regression, logits] = model.forward(batch.images);
        return multitaskLossTensor(
          regression, logits, batch.regressionTargets, batch.labels, gamma, beta,
        );
      }, true)!;
      total += (await value.data())[0];
      value.dispose();
    }
    epochLosses.push(total / batches.length);
  }
  optimizer.dispose();
  return epochLosses;
}
