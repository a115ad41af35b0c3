fn main() {
    let code = swanson_ep_cli::run(std::env::args_os());
    std::process::exit(code);
}
