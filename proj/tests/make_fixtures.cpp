// Regenerates fixtures/ from the builders in support/examples.hpp.
#include <filesystem>
#include <iostream>

#include "fva/json_io.hpp"
#include "support/examples.hpp"

int main(int argc, char** argv)
{
    namespace ex = fva::examples;
    const std::filesystem::path dir = argc > 1 ? argv[1] : FVA_FIXTURE_DIR;
    std::filesystem::create_directories(dir);
    auto put = [&](const std::string& name, const std::string& text) {
        fva::write_file((dir / name).string(), text);
        std::cout << (dir / name).string() << "\n";
    };
    put("doubling.json", fva::serialize(ex::doubling()));
    put("repeat_last.json", fva::serialize(ex::repeat_last()));
    put("refreshed_loop.json", fva::serialize(ex::refreshed_loop()));
    put("single_a.json", fva::serialize(ex::single_a()));
    put("fa_ab.json", fva::serialize(ex::word_automaton({"a", "b"})));
    put("fa_aa.json", fva::serialize(ex::word_automaton({"a", "a"})));
    put("two_fva.json", fva::serialize(ex::two_fva()));
    put("z_or_ab.json", fva::serialize(ex::z_or_ab()));
    put("receiving_client.json", fva::serialize(ex::receiving_client()));
    put("sending_service.json", fva::serialize(ex::sending_service()));
    put("cart_client.json", fva::serialize(ex::cart_client()));
    put("cart.json", fva::serialize(ex::cart_service()));
    put("search.json", fva::serialize(ex::search_service()));
    put("cart_session.txt",
        "# one shopping round\n"
        "!Create_Cart(c1)\n"
        "!Search(i1)\n"
        "?Num(i1)\n"
        "!Add_Cart(c1,i1)\n"
        "!Search(i2)\n"
        "?Fail\n"
        "?End_Cart(c1)\n");
    return 0;
}
