fn main() {
    let code = coupon_cli::run(std::env::args_os());
    std::process::exit(code);
}
