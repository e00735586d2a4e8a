fn main() {
    let env = std::env::vars().filter(|(k, _)| k.starts_with(dil::cli::ENV_PREFIX));
    std::process::exit(dil::cli::main_with(std::env::args_os(), env));
}
