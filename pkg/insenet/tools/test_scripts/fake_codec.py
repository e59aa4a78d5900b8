"""Stand-in codec round trip: delays the input and appends a tail.

Usage: fake_codec.py INPUT OUTPUT BITRATE DELAY_SAMPLES
       fake_codec.py fail
"""
import sys

import numpy as np
import soundfile as sf


def main():
    if sys.argv[1] == "fail":
        print("encoder: unsupported configuration", file=sys.stderr)
        sys.exit(3)
    input_path, output_path, bitrate, delay = sys.argv[1:5]
    data, rate = sf.read(input_path, dtype="float64")
    delay = int(delay)
    coded = np.concatenate([np.zeros(delay), data, np.zeros(2048)])
    sf.write(output_path, coded, rate, subtype="FLOAT")
    print(f"coded at {bitrate} kbps")


if __name__ == "__main__":
    main()
