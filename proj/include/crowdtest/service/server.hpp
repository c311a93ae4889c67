#pragma once

#include <memory>
#include <string>

#include "crowdtest/service/task_store.hpp"

namespace httplib {
class Server;
}

namespace crowdtest::service {

/// HTTP/JSON front end over a TaskStore.
///
///   GET  /tasks                        snapshots of every task
///   GET  /tasks/{id}                   one snapshot
///   GET  /tasks/{id}/estimates         latest estimates plus primary history
///   GET  /tasks/{id}/forecast?target=  required cost, 409 while warming up
///   GET  /tasks/{id}/tradeoff?quality=&cost=
///   POST /tasks/{id}/reports           JSON array (or single object) of reports
///   POST /tasks/{id}/close             manual close, idempotent
///   GET  /tasks/{id}/events?since=N[&stream=1&timeout=S]
class ApiServer {
 public:
  explicit ApiServer(TaskStore& store);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port; throws
  /// std::runtime_error when the address is unavailable.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void listen();
  void stop();

 private:
  void routes();

  TaskStore& store_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace crowdtest::service
