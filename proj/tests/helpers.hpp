#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "gridpf/matpower.hpp"
#include "gridpf/network.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
    return std::string(GRIDPF_DATA_DIR) + "/" + name;
}

inline std::string fixture_path(const std::string& name) {
    return std::string(GRIDPF_FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline gridpf::NetworkCase load_case(const std::string& name) {
    return gridpf::load_matpower_file(data_path(name));
}

// ref bus 1 -- x=0.1 line -- load bus 2
inline const char* kTwoBusCase = R"(function mpc = case2
mpc.version = '2';
mpc.baseMVA = 100;
mpc.bus = [
    1  3  0   0  0  0  1  1.0  0  230  1  1.1  0.9;
    2  1  50  10 0  0  1  1.0  0  230  1  1.1  0.9;
];
mpc.gen = [
    1  60  0  50  -50  1.0  100  1  200  0;
];
mpc.branch = [
    1  2  0  0.1  0  250  250  250  0  0  1  -360  360;
];
)";

}  // namespace testutil
