use std::io;

fn configure_threads() {
    let Ok(value) = std::env::var("FILAMENT_THREADS") else {
        return;
    };
    match value.trim().parse::<usize>() {
        Ok(0) => {}
        Ok(n) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("warning: could not set thread count: {e}");
            }
        }
        Err(_) => eprintln!("warning: ignoring FILAMENT_THREADS={value}"),
    }
}

fn main() {
    configure_threads();
    let code = filament::cli::run_cli(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
