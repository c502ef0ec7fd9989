"""flowbot: deterministic dataflow runtime for a speech-gated assistant.

Subpackages:
  flowcore   - packets, streams, watchdogs, latches, aggregators, graph runtime
  skills     - skill registry, dispatch and slot-filling manager
  dsp        - PCM/WAV, resampling, log-mel features, noise augmentation
  perception - embedding matching, int8 quantization, image normalization,
               layer parameter accounting
  robotics   - locomotion wire codec, time-of-flight and sweep geometry
  harness    - simulated devices, scenario runner and CLI
"""

__version__ = "0.1.0"
