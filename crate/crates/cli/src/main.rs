use std::io::Write;

fn main() {
    let out = regdom_cli::run_args(std::env::args_os());
    let mut stream: Box<dyn Write> = if out.code == regdom_cli::EXIT_OK {
        Box::new(std::io::stdout())
    } else {
        Box::new(std::io::stderr())
    };
    let _ = stream.write_all(out.stdout.as_bytes());
    std::process::exit(out.code);
}
