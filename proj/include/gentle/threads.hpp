#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gentle/presentation.hpp"

namespace gentle {

// sigma/eps over arrows plus the signs of trivial threads. Determined up
// to a global flip per constraint component; assign_signs seeds each
// component so that the first arrow in name order gets +1.
struct SignAssignment {
    std::map<std::string, int> sigma, eps;      // arrow -> +1/-1
    std::map<std::string, int> h_sigma;         // vertex -> sigma(h_v), where h_v exists
    std::map<std::string, int> p_sigma;         // vertex -> sigma(p_v) = eps(p_v)
};

SignAssignment assign_signs(const Presentation& p);

// Constraint components as lists of (arrow, 's'|'e') variables; flipping
// all signs of one component yields the other admissible assignments.
std::vector<std::vector<std::pair<std::string, char>>> sign_components(const Presentation& p);

struct Thread {
    bool permitted = true;
    std::vector<std::string> arrows;  // traversal order; empty = trivial thread
    std::string anchor;               // vertex of a trivial thread
    std::string start, end;
    int sigma = 0, eps = 0;
    bool trivial() const { return arrows.empty(); }
    int length() const { return (int)arrows.size(); }
};

struct ThreadSystem {
    std::vector<Thread> permitted;
    std::vector<Thread> forbidden;
    // Oriented cycles all of whose cyclic consecutive compositions lie in
    // P; stored as arrow lists, lexicographically smallest rotation first.
    std::vector<std::vector<std::string>> cycles;
};

ThreadSystem compute_threads(const Presentation& p, const SignAssignment& signs);

struct Token {
    std::string vertex;
    int sign = +1;
    friend bool operator==(const Token&, const Token&) = default;
};
std::string to_string(const Token& t);
Token parse_token(const std::string& s);

struct ThreadArray {
    std::vector<std::vector<Token>> columns;
};

// Columns ordered by non-increasing length, then lexicographically.
ThreadArray thread_array(const Presentation& p);
ThreadArray thread_array(const Presentation& p, const SignAssignment& signs);
std::string render_thread_array(const ThreadArray& a);

struct PartitionEncoding {
    std::vector<int> lambda;                     // non-increasing, sums to 2n
    std::vector<std::pair<int, int>> gamma;      // matching on 1..2n, pairs sorted
};
PartitionEncoding partition_encoding(const Presentation& p);

// Reconstructs the presentation determined by a thread array; inverse of
// thread_array up to renaming. Throws domain_error on inconsistent input.
Presentation decode_thread_array(const ThreadArray& a);

nlohmann::ordered_json threads_json(const ThreadSystem& ts);

}  // namespace gentle
