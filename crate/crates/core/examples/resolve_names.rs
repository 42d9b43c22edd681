//! Queries the fixture name-resolver dictionary in process, or serves it
//! over HTTP with `--serve PORT`.
//!
//!     cargo run --example resolve_names -- "1980-090A" "voyagr" "la silla"
//!     cargo run --example resolve_names -- --serve 8080

use facmatch::model::Direction;
use facmatch::resolver::{load_index, serve, NameIndex, ResolverHandle};

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/resolver");
    let (index, diagnostics) = load_index(
        format!("{dir}/resolver.json").as_ref(),
        Some(format!("{dir}/facilities.csv").as_ref()),
    )
    .expect("fixture dictionary loads");
    for d in diagnostics {
        eprintln!("{d}");
    }

    let args: Vec<String> = std::env::args().skip(1).collect();
    if let [flag, port] = args.as_slice() {
        if flag == "--serve" {
            let addr = std::net::SocketAddr::from(([127, 0, 0, 1], port.parse().expect("port number")));
            println!("try: curl 'http://{addr}/resolve?q=cosmos&limit=3'");
            let rt = tokio::runtime::Runtime::new().expect("runtime");
            rt.block_on(serve(addr, ResolverHandle::new(index), async {
                let _ = tokio::signal::ctrl_c().await;
            }))
            .expect("server runs");
            return;
        }
    }

    let queries = if args.is_empty() { vec!["1980-090A".into(), "voyagr".into(), "la silla".into()] } else { args };
    for q in &queries {
        println!("{q:?}");
        for hit in index.resolve(q, 3) {
            println!("    {:.3}  {:<50} {}", hit.score, hit.slug, hit.label);
        }
    }
    if let Some(voyager) = index.aliases("voyager", Some(Direction::Narrower)) {
        let parts: Vec<&str> = voyager.expanded.iter().map(|e| e.slug.as_str()).collect();
        println!("voyager: aliases {:?}, parts {parts:?}", voyager.aliases);
    }
}
