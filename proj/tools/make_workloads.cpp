// Regenerates the checked-in workload traces. Fixed seeds, so output
// is identical on every run: `make_workloads [out_dir]`.

#include <fstream>
#include <iostream>
#include <string>

#include "hybsim/trace.hpp"

using namespace hybsim;

namespace {

void write_file(const std::string& dir, const std::string& name, const ParsedTrace& t) {
    const std::string path = dir + "/" + name;
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << "# generated by make_workloads; do not edit\n";
    write_trace(out, t);
    std::cout << path << ": " << t.records.size() << " records\n";
}

ParsedTrace stream_vs_working_set() {
    // isolated streamer thrashes; the non-isolated working set should
    // ride it out
    ParsedTrace t;
    t.domains.pid_to_idid = {{2, 1}};
    const auto a = gen_working_set(1, 25000, 0x100000, 400, 64, 0.7, 101);
    const auto b = gen_uniform(2, 25000, 0x4000000, 0x4000000 + (16ull << 20), 0.5, 102);
    t.records = interleave({a, b}, 8);
    return t;
}

ParsedTrace two_working_sets() {
    ParsedTrace t;
    t.domains.pid_to_idid = {{2, 3}};
    const auto a = gen_working_set(1, 25000, 0x200000, 600, 64, 0.6, 201);
    const auto b = gen_working_set(2, 25000, 0x800000, 600, 64, 0.6, 202);
    t.records = interleave({a, b}, 8);
    return t;
}

ParsedTrace chase_vs_uniform() {
    ParsedTrace t;
    t.domains.pid_to_idid = {{2, 2}};
    const auto a = gen_pointer_chase(1, 25000, 0x1000000, 2048, 64, 301);
    const auto b = gen_uniform(2, 25000, 0x8000000, 0x8000000 + (4ull << 20), 0.5, 302);
    t.records = interleave({a, b}, 8);
    return t;
}

ParsedTrace io_sharing_demo() {
    // pid 7 runs isolated and moves data through the shared region
    // with io ops; the two trailing records are deliberate violations
    ParsedTrace t;
    t.domains.pid_to_idid = {{7, 2}};
    t.domains.shared_region = {{0x500000, 0x540000}};
    t.records = {
        {3, TraceOp::kRead, 0x100040},  {3, TraceOp::kWrite, 0x100080},
        {7, TraceOp::kRead, 0x7F0000},  {7, TraceOp::kWrite, 0x7F0040},
        {7, TraceOp::kIoRead, 0x500040}, {7, TraceOp::kIoRead, 0x500080},
        {3, TraceOp::kIoRead, 0x500040}, {3, TraceOp::kRead, 0x500100},
        {7, TraceOp::kIoWrite, 0x520000}, {3, TraceOp::kFlush, 0x100040},
        {7, TraceOp::kFlush, 0x7F0000},
        {7, TraceOp::kRead, 0x500040},  // isolated pid, regular op in region
        {9, TraceOp::kIoWrite, 0x410000},  // io move outside the region
    };
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "workloads";
    try {
        write_file(dir, "mix_stream_vs_working_set.trace", stream_vs_working_set());
        write_file(dir, "mix_two_working_sets.trace", two_working_sets());
        write_file(dir, "mix_chase_vs_uniform.trace", chase_vs_uniform());
        write_file(dir, "io_sharing_demo.trace", io_sharing_demo());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
