fn main() {
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).try_init();
    std::process::exit(xg_cli::run(std::env::args_os()));
}
