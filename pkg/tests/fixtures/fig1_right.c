int main() {
  char c[100];
  int d=0;
  printf("Enter text:");
  if(fgets(c,sizeof(c), stdin) != NULL) {
    for(d=0;d<10;d++){
      printf("line\n");
    }
  } else {
    return 1+1;
  }
  return 3;
}
