// Copyright 2026 The Smartcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Stand-in anomaly model server: answers "Anomaly" when the request body
// contains the configured keyword and "Normal" otherwise.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "httplib.h"

int main(int argc, char** argv) {
  CLI::App app{"keyword anomaly model stub"};
  std::string listen = "127.0.0.1:9090";
  std::string keyword = "fraud";
  app.add_option("--listen", listen, "host:port to serve on");
  app.add_option("--keyword", keyword, "substring that marks a request anomalous");
  CLI11_PARSE(app, argc, argv);

  auto colon = listen.rfind(':');
  if (colon == std::string::npos) {
    std::cerr << "listen address must be host:port\n";
    return 2;
  }
  std::string host = listen.substr(0, colon);
  int port = std::stoi(listen.substr(colon + 1));

  httplib::Server server;
  server.Post("/detect_anomaly", [&keyword](const httplib::Request& req,
                                            httplib::Response& res) {
    bool anomalous = req.body.find(keyword) != std::string::npos;
    res.status = 200;
    res.set_content(anomalous ? "Anomaly" : "Normal", "text/plain");
  });

  std::cout << "model stub listening on " << listen << "\n";
  if (!server.listen(host, port)) {
    std::cerr << "cannot bind " << listen << "\n";
    return 1;
  }
  return 0;
}
