// Regenerates the bundled synthetic sample data set.
#include <cstdio>

#include "argocast/synthetic.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: make_sample_data <output-dir>\n");
    return 2;
  }
  argocast::synth::SynthSpec spec;
  spec.start = argocast::Date::from_ymd(2020, 8, 12);
  spec.end = argocast::Date::from_ymd(2021, 3, 8);
  spec.seed = 7;
  const auto data = argocast::synth::generate(spec);
  argocast::synth::write_csvs(data, argv[1]);
  std::printf("sample data written to %s\n", argv[1]);
  return 0;
}
