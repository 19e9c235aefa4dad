#pragma once

// Hand-written protocol fixtures modeling the four incident categories the
// pipeline is exercised against, plus the staking example used throughout the
// docs and a benign vault. Each returns a solgen::File; call solgen::build to
// get source + AST.

#include "support/solgen.hpp"

namespace fixtures {

using namespace solgen;

// Staking-style protocol: reward scales with an LP-reserve spot price.
// Price flows: _lp.getReserves() -> price ; price -> _rewardToken.transfer().
inline File warp_staking() {
    File file;
    file.path = "WarpStaking.sol";

    Contract pair;
    pair.name = "IPair";
    pair.kind = "interface";
    {
        Function f;
        f.name = "getReserves";
        f.returns = {{"uint256", ""}, {"uint256", ""}, {"uint32", ""}};
        f.visibility = "external";
        f.mutability = "view";
        f.declaration_only = true;
        pair.functions.push_back(f);
    }

    Contract erc20;
    erc20.name = "IERC20";
    erc20.kind = "interface";
    {
        Function f;
        f.name = "transfer";
        f.params = {{"address", "to"}, {"uint256", "amount"}};
        f.returns = {{"bool", ""}};
        f.visibility = "external";
        f.declaration_only = true;
        erc20.functions.push_back(f);
    }

    Contract c;
    c.name = "WarpStaking";
    c.state = {
        {"IPair", "_lp", "private"},
        {"IERC20", "_rewardToken", "private"},
        {"mapping(address => uint256)", "_stakes", "private"},
    };
    {
        Function f;
        f.name = "tokenPrice";
        f.returns = {{"uint256", ""}};
        f.mutability = "view";
        f.body = {
            local_tuple({{"uint256", "usdt"}, {"uint256", "warp"}, {"", ""}},
                        call(member(id("_lp"), "getReserves"), {})),
            local("uint256", "price",
                  bin("/", bin("*", id("usdt"), num("1e18")), id("warp"))),
            ret(id("price")),
        };
        c.functions.push_back(f);
    }
    {
        Function f;
        f.name = "claim";
        f.body = {
            local("uint256", "price", call(id("tokenPrice"), {})),
            local("uint256", "reward",
                  bin("/", bin("*", index(id("_stakes"), member(id("msg"), "sender")),
                               id("price")),
                      num("1e18"))),
            expr_stmt(call(member(id("_rewardToken"), "transfer"),
                           {member(id("msg"), "sender"), id("reward")})),
        };
        c.functions.push_back(f);
    }

    file.contracts = {pair, erc20, c};
    return file;
}

// DEX-style protocol: spot price from IUniswapV2Pair reserves feeds a payout.
inline File btb_dex() {
    File file;
    file.path = "BtbSwap.sol";

    Contract pair;
    pair.name = "IUniswapV2Pair";
    pair.kind = "interface";
    {
        Function f;
        f.name = "getReserves";
        f.returns = {{"uint256", ""}, {"uint256", ""}, {"uint32", ""}};
        f.visibility = "external";
        f.mutability = "view";
        f.declaration_only = true;
        pair.functions.push_back(f);
    }

    Contract erc20;
    erc20.name = "IERC20Upgradable";
    erc20.kind = "interface";
    {
        Function f;
        f.name = "transfer";
        f.params = {{"address", "to"}, {"uint256", "amount"}};
        f.returns = {{"bool", ""}};
        f.visibility = "external";
        f.declaration_only = true;
        erc20.functions.push_back(f);
    }

    Contract c;
    c.name = "BtbSwap";
    c.state = {
        {"address", "pairAddress", "public"},
        {"address", "token", "public"},
    };
    {
        Function f;
        f.name = "getPrice";
        f.returns = {{"uint256", ""}};
        f.mutability = "view";
        f.body = {
            local_tuple({{"uint256", "reserve0"}, {"uint256", "reserve1"}, {"", ""}},
                        call(member(conv("IUniswapV2Pair", id("pairAddress")),
                                    "getReserves"),
                             {})),
            local("uint256", "price",
                  bin("/", bin("*", id("reserve0"), num("1e18")), id("reserve1"))),
            ret(id("price")),
        };
        c.functions.push_back(f);
    }
    {
        Function f;
        f.name = "sellToken";
        f.params = {{"uint256", "amount"}};
        f.body = {
            local("uint256", "price", call(id("getPrice"), {})),
            local("uint256", "payout",
                  bin("/", bin("*", id("amount"), id("price")), num("1e18"))),
            expr_stmt(call(member(conv("IERC20Upgradable", id("token")), "transfer"),
                           {member(id("msg"), "sender"), id("payout")})),
        };
        c.functions.push_back(f);
    }

    file.contracts = {pair, erc20, c};
    return file;
}

// Lending-style protocol: collateral price from a raw balanceOf read.
inline File hflh_lending() {
    File file;
    file.path = "HflhLending.sol";

    Contract erc20;
    erc20.name = "IERC20";
    erc20.kind = "interface";
    {
        Function f;
        f.name = "balanceOf";
        f.params = {{"address", "account"}};
        f.returns = {{"uint256", ""}};
        f.visibility = "external";
        f.mutability = "view";
        f.declaration_only = true;
        erc20.functions.push_back(f);
        Function t;
        t.name = "transfer";
        t.params = {{"address", "to"}, {"uint256", "amount"}};
        t.returns = {{"bool", ""}};
        t.visibility = "external";
        t.declaration_only = true;
        erc20.functions.push_back(t);
        Function s;
        s.name = "totalSupply";
        s.returns = {{"uint256", ""}};
        s.visibility = "external";
        s.mutability = "view";
        s.declaration_only = true;
        erc20.functions.push_back(s);
    }

    Contract c;
    c.name = "HflhLending";
    c.state = {
        {"address", "lpAddress", "public"},
        {"address", "usdt", "public"},
        {"mapping(address => uint256)", "deposits", "public"},
    };
    {
        Function f;
        f.name = "collateralPrice";
        f.returns = {{"uint256", ""}};
        f.mutability = "view";
        f.body = {
            local("uint256", "bal",
                  call(member(conv("IERC20", id("usdt")), "balanceOf"), {id("lpAddress")})),
            local("uint256", "supply",
                  call(member(conv("IERC20", id("lpAddress")), "totalSupply"), {})),
            local("uint256", "price", bin("/", bin("*", id("bal"), num("1e18")), id("supply"))),
            ret(id("price")),
        };
        c.functions.push_back(f);
    }
    {
        Function f;
        f.name = "borrow";
        f.params = {{"uint256", "collateral"}};
        f.body = {
            local("uint256", "price", call(id("collateralPrice"), {})),
            local("uint256", "amount",
                  bin("/", bin("*", id("collateral"), id("price")), num("1e18"))),
            expr_stmt(call(member(conv("IERC20", id("usdt")), "transfer"),
                           {member(id("msg"), "sender"), id("amount")})),
        };
        c.functions.push_back(f);
    }

    file.contracts = {erc20, c};
    return file;
}

// Deposit-style yield pool: caller-supplied baseAmount moves the pool price.
inline File woofi_pool() {
    File file;
    file.path = "WoofiPool.sol";

    Contract helper;
    helper.name = "TransferHelper";
    helper.kind = "library";
    {
        Function f;
        f.name = "safeTransfer";
        f.params = {{"address", "token"}, {"address", "to"}, {"uint256", "value"}};
        f.visibility = "internal";
        f.declaration_only = true;
        helper.functions.push_back(f);
    }

    Contract c;
    c.name = "WoofiPool";
    c.state = {
        {"uint256", "price", "public"},
        {"address", "quoteToken", "public"},
    };
    {
        Function f;
        f.name = "sellBase";
        f.params = {{"uint256", "baseAmount"}};
        f.returns = {{"uint256", "quoteAmount"}};
        f.body = {
            local("uint256", "newPrice",
                  bin("-", id("price"),
                      bin("/", bin("*", id("price"), id("baseAmount")), num("1e18")))),
            assign(id("quoteAmount"),
                   bin("/", bin("*", id("baseAmount"), id("newPrice")), num("1e18"))),
            assign(id("price"), id("newPrice")),
            expr_stmt(call(member(id("TransferHelper"), "safeTransfer"),
                           {id("quoteToken"), member(id("msg"), "sender"),
                            id("quoteAmount")})),
        };
        c.functions.push_back(f);
    }

    file.contracts = {helper, c};
    return file;
}

// Yield-farming protocol from the staking writeup: rewards priced off LP
// reserves, claimable in one call.
inline File egd_finance() {
    File file;
    file.path = "EgdFinance.sol";

    Contract pair;
    pair.name = "IPancakePair";
    pair.kind = "interface";
    {
        Function f;
        f.name = "getReserves";
        f.returns = {{"uint256", ""}, {"uint256", ""}, {"uint32", ""}};
        f.visibility = "external";
        f.mutability = "view";
        f.declaration_only = true;
        pair.functions.push_back(f);
    }

    Contract erc20;
    erc20.name = "IERC20";
    erc20.kind = "interface";
    {
        Function f;
        f.name = "transfer";
        f.params = {{"address", "to"}, {"uint256", "amount"}};
        f.returns = {{"bool", ""}};
        f.visibility = "external";
        f.declaration_only = true;
        erc20.functions.push_back(f);
    }

    Contract c;
    c.name = "EgdFinance";
    c.state = {
        {"IPancakePair", "pair", "public"},
        {"IERC20", "egd", "public"},
        {"mapping(address => uint256)", "stakes", "public"},
    };
    {
        Function f;
        f.name = "getEGDPrice";
        f.returns = {{"uint256", ""}};
        f.mutability = "view";
        f.body = {
            local_tuple({{"uint256", "usdtReserve"}, {"uint256", "egdReserve"}, {"", ""}},
                        call(member(id("pair"), "getReserves"), {})),
            local("uint256", "price",
                  bin("/", bin("*", id("usdtReserve"), num("1e18")), id("egdReserve"))),
            ret(id("price")),
        };
        c.functions.push_back(f);
    }
    {
        Function f;
        f.name = "claimAllReward";
        f.body = {
            local("uint256", "price", call(id("getEGDPrice"), {})),
            local("uint256", "reward",
                  bin("/", bin("*", index(id("stakes"), member(id("msg"), "sender")),
                               num("1e18")),
                      id("price"))),
            expr_stmt(call(member(id("egd"), "transfer"),
                           {member(id("msg"), "sender"), id("reward")})),
        };
        c.functions.push_back(f);
    }
    {
        Function f;
        f.name = "stake";
        f.params = {{"uint256", "amount"}};
        f.body = {
            assign(index(id("stakes"), member(id("msg"), "sender")), id("amount"), "+="),
        };
        c.functions.push_back(f);
    }

    file.contracts = {pair, erc20, c};
    return file;
}

// Fixed-price vault: nothing outside the contract can move the quote.
inline File benign_vault() {
    File file;
    file.path = "BenignVault.sol";

    Contract erc20;
    erc20.name = "IERC20";
    erc20.kind = "interface";
    {
        Function f;
        f.name = "transfer";
        f.params = {{"address", "to"}, {"uint256", "amount"}};
        f.returns = {{"bool", ""}};
        f.visibility = "external";
        f.declaration_only = true;
        erc20.functions.push_back(f);
    }

    Contract c;
    c.name = "BenignVault";
    c.state = {
        {"IERC20", "token", "public"},
        {"mapping(address => uint256)", "balances", "public"},
    };
    {
        Function f;
        f.name = "quote";
        f.params = {{"uint256", "amount"}};
        f.returns = {{"uint256", ""}};
        f.mutability = "pure";
        f.body = {
            local("uint256", "cost", bin("*", id("amount"), num("100"))),
            ret(id("cost")),
        };
        c.functions.push_back(f);
    }
    {
        Function f;
        f.name = "withdraw";
        f.params = {{"uint256", "amount"}};
        f.body = {
            expr_stmt(call(id("require"),
                           {bin(">=", index(id("balances"), member(id("msg"), "sender")),
                                id("amount"))})),
            assign(index(id("balances"), member(id("msg"), "sender")), id("amount"), "-="),
            expr_stmt(call(member(id("token"), "transfer"),
                           {member(id("msg"), "sender"), id("amount")})),
        };
        c.functions.push_back(f);
    }

    file.contracts = {erc20, c};
    return file;
}

} // namespace fixtures
