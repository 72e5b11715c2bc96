#include "mechgap/json_io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

namespace mechgap {

using nlohmann::json;

namespace {

json price_to_json(double p) {
    if (p == kPriceInf) return "inf";
    return p;
}

double price_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return kPriceInf;
        throw std::invalid_argument("price: unknown string literal");
    }
    return j.get<double>();
}

}  // namespace

json to_json(const DistributionSpec& d) {
    json j;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Triangular>) {
                j = {{"type", "triangular"}, {"v", v.v}, {"q", v.q}};
            } else if constexpr (std::is_same_v<T, TriangularLimit>) {
                j = {{"type", "tri_inf"}};
            } else if constexpr (std::is_same_v<T, EqualRevenueTruncated>) {
                j = {{"type", "equal_revenue"}, {"t", v.t}};
            } else {
                j = {{"type", "root_irregular"}, {"n", v.n}};
            }
        },
        d.value());
    return j;
}

DistributionSpec distribution_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "triangular")
        return tri(j.at("v").get<double>(), j.at("q").get<double>());
    if (type == "tri_inf") return tri_inf();
    if (type == "equal_revenue") return equal_revenue(j.at("t").get<double>());
    if (type == "root_irregular") return root_irregular(j.at("n").get<int>());
    throw std::invalid_argument("distribution: unknown type '" + type + "'");
}

json to_json(const Instance& inst) {
    json buyers = json::array();
    for (const auto& d : inst.buyers) buyers.push_back(to_json(d));
    return {{"buyers", std::move(buyers)}};
}

Instance instance_from_json(const json& j) {
    Instance inst;
    for (const auto& b : j.at("buyers")) inst.buyers.push_back(distribution_from_json(b));
    inst.validate();
    return inst;
}

json to_json(const SpmPolicy& policy) {
    json prices = json::array();
    for (double p : policy.prices) prices.push_back(price_to_json(p));
    return {{"order", policy.order}, {"prices", std::move(prices)}};
}

SpmPolicy policy_from_json(const json& j) {
    SpmPolicy policy;
    policy.order = j.at("order").get<std::vector<std::size_t>>();
    for (const auto& p : j.at("prices")) policy.prices.push_back(price_from_json(p));
    return policy;
}

json to_json(const RevenueReport& rep) {
    json j = {{"mechanism", rep.mechanism},
              {"revenue", rep.revenue},
              {"numeric_error", rep.numeric_error},
              {"method", rep.method}};
    if (rep.price) j["price"] = price_to_json(*rep.price);
    if (rep.policy) j["policy"] = to_json(*rep.policy);
    return j;
}

Instance load_instance(const std::string& path) {
    json j;
    if (path == "-") {
        std::stringstream buf;
        buf << std::cin.rdbuf();
        j = json::parse(buf.str());
    } else {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open instance file: " + path);
        j = json::parse(in);
    }
    return instance_from_json(j);
}

}  // namespace mechgap
